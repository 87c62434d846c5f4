#ifndef EMMS_NETWORK_HPP
#define EMMS_NETWORK_HPP

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "emms/geo.hpp"

namespace emms {

struct NodeRef {
  std::string id;
  CartPoint pos;
};

/// Directed street segment. `length` and `speed_limit` come from the
/// document and are authoritative; the chord between the endpoint nodes is
/// what candidate queries measure against by default.
struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;       // meters
  double speed_limit = 0.0;  // m/s
  std::vector<CartPoint> shape;  // optional polyline, empty if absent
};

/// Permission record: traffic may continue from `from_edge` onto `to_edge`.
/// Physical adjacency alone never implies permission.
struct Connection {
  std::string from_edge;
  std::string to_edge;
};

struct GeoBounds {
  GeoPoint min;
  GeoPoint max;
};

class RoadNetwork {
 public:
  void add_node(NodeRef node);
  void add_edge(Edge edge);
  void add_connection(Connection conn);

  /// Validates referential integrity, edge invariants, and connection
  /// physicality, then freezes the geographic boundary. Throws on the first
  /// violation. Must be called once after construction; parse_network does
  /// this for you.
  void finalize(std::optional<GeoPoint> projection_origin = std::nullopt);

  const NodeRef& node(const std::string& id) const;
  const Edge& edge(const std::string& id) const;
  bool has_edge(const std::string& id) const;

  const CartPoint& edge_from_pos(const Edge& e) const;
  const CartPoint& edge_to_pos(const Edge& e) const;

  const std::vector<NodeRef>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t connection_count() const { return connections_.size(); }

  /// Origin of the projection that produced the planar coordinates, when
  /// the document declared one.
  const std::optional<GeoPoint>& projection_origin() const { return origin_; }

  const GeoBounds& boundary() const { return boundary_; }

  /// Projection context aligned with this network's planar frame: the
  /// declared origin when present, otherwise the boundary centroid.
  ProjectionContext projection_context() const;

  friend bool connection_allowed(const RoadNetwork& net,
                                 const std::string& from_edge,
                                 const std::string& to_edge);

 private:
  std::vector<NodeRef> nodes_;
  std::vector<Edge> edges_;
  std::vector<Connection> connections_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::unordered_set<std::string> connection_keys_;
  std::optional<GeoPoint> origin_;
  GeoBounds boundary_;
  bool finalized_ = false;
};

/// Parses the network document subset:
///   <net>
///     <location origLat=".." origLon=".."/>          (optional)
///     <junction id=".." x=".." y=".."/>
///     <edge id=".." from=".." to=".." speed=".." length=".."
///           [shape="x,y x,y ..."]/>
///     <connection from=".." to=".."/>
///   </net>
/// Unknown elements and attributes are ignored. Malformed markup raises a
/// parse error carrying the line number; reference violations raise
/// integrity errors; a network without nodes or edges raises empty-network.
RoadNetwork parse_network(std::string_view document);

RoadNetwork load_network(const std::string& path);

/// True iff a connection record (from_edge, to_edge) exists. Unknown ids
/// raise unknown-edge.
bool connection_allowed(const RoadNetwork& net, const std::string& from_edge,
                        const std::string& to_edge);

struct CandidateEdge {
  std::string edge_id;
  double distance = 0.0;  // meters, point to edge geometry
};

enum class MatchGeometry {
  chord,     // distance to the from-to node segment
  polyline,  // min distance over the shape segments, chord if no shape
};

/// Uniform-grid index over edge geometry, cell size 2x the query radius.
/// Results are identical to the brute-force filter over all edges: edges
/// within `radius` of the query point, ascending by distance, ties broken
/// by lexicographic edge id.
class SpatialGrid {
 public:
  SpatialGrid(const RoadNetwork& net, double radius,
              MatchGeometry geometry = MatchGeometry::chord);

  std::vector<CandidateEdge> candidates(const CartPoint& p) const;

  double radius() const { return radius_; }
  MatchGeometry geometry() const { return geometry_; }

 private:
  struct CellKey {
    long long cx;
    long long cy;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const {
      return std::hash<long long>()(k.cx * 73856093LL ^ k.cy * 19349663LL);
    }
  };

  CellKey cell_of(double x, double y) const;
  double edge_distance(const Edge& e, const CartPoint& p) const;

  const RoadNetwork& net_;
  double radius_;
  double cell_size_;
  MatchGeometry geometry_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

/// One-shot candidate query. Builds a throwaway grid; callers issuing many
/// queries should hold a SpatialGrid instead.
std::vector<CandidateEdge> candidate_edges(
    const RoadNetwork& net, const CartPoint& p, double radius,
    MatchGeometry geometry = MatchGeometry::chord);

}  // namespace emms

#endif  // EMMS_NETWORK_HPP
