#ifndef EMMS_TESTS_FIXTURES_HPP
#define EMMS_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "emms/line_spec.hpp"
#include "emms/network.hpp"

namespace emms::test {

inline ProjectionContext origin_ctx() { return ProjectionContext{{0.0, 0.0}}; }

/// One-way straight corridor: nodes n0..nN at x = i * edge_len, edges
/// e1..eN with consecutive connections registered.
inline RoadNetwork corridor(int edge_count, double edge_len = 100.0,
                            double speed = 10.0) {
  RoadNetwork net;
  for (int i = 0; i <= edge_count; ++i) {
    net.add_node({"n" + std::to_string(i), {i * edge_len, 0.0}});
  }
  for (int i = 1; i <= edge_count; ++i) {
    net.add_edge({"e" + std::to_string(i), "n" + std::to_string(i - 1),
                  "n" + std::to_string(i), edge_len, speed, {}});
  }
  for (int i = 1; i < edge_count; ++i) {
    net.add_connection({"e" + std::to_string(i), "e" + std::to_string(i + 1)});
  }
  net.finalize();
  return net;
}

/// Two perpendicular one-way edges meeting at (100, 0), with or without the
/// connection record.
inline RoadNetwork l_shape(bool with_connection) {
  RoadNetwork net;
  net.add_node({"a", {0.0, 0.0}});
  net.add_node({"b", {100.0, 0.0}});
  net.add_node({"c", {100.0, 100.0}});
  net.add_edge({"e1", "a", "b", 100.0, 10.0, {}});
  net.add_edge({"e2", "b", "c", 100.0, 10.0, {}});
  if (with_connection) {
    net.add_connection({"e1", "e2"});
  }
  net.finalize();
  return net;
}

struct GridIds {
  static std::string node(int row, int col) {
    return "n_" + std::to_string(row) + "_" + std::to_string(col);
  }
};

/// Manhattan grid of two-way street pairs. Junction (row, col) sits at
/// (col * spacing, row * spacing). All turning movements are registered as
/// connections; U-turns are not.
inline RoadNetwork grid_network(int rows, int cols, double spacing = 100.0,
                                double speed = 10.0) {
  RoadNetwork net;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      net.add_node({GridIds::node(r, c), {c * spacing, r * spacing}});
    }
  }
  const auto add_pair = [&](const std::string& tag, const std::string& from,
                            const std::string& to) {
    net.add_edge({tag + "_f", from, to, spacing, speed, {}});
    net.add_edge({tag + "_r", to, from, spacing, speed, {}});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      add_pair("h_" + std::to_string(r) + "_" + std::to_string(c),
               GridIds::node(r, c), GridIds::node(r, c + 1));
    }
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      add_pair("v_" + std::to_string(r) + "_" + std::to_string(c),
               GridIds::node(r, c), GridIds::node(r + 1, c));
    }
  }
  // Every inbound/outbound pair at a junction except the U-turn.
  for (const Edge& in : net.edges()) {
    for (const Edge& out : net.edges()) {
      if (in.to == out.from &&
          !(in.from == out.to && in.to == out.from)) {
        net.add_connection({in.id, out.id});
      }
    }
  }
  net.finalize();
  return net;
}

/// Random simple path through a grid, as a junction sequence turned into
/// directed edge ids. Returns an empty list when the walk dead-ends below
/// the minimum length (caller retries).
inline std::vector<std::string> random_grid_path(const RoadNetwork& net,
                                                 int rows, int cols,
                                                 int target_edges,
                                                 std::mt19937& rng) {
  std::uniform_int_distribution<int> row_dist(0, rows - 1);
  std::uniform_int_distribution<int> col_dist(0, cols - 1);
  int r = row_dist(rng);
  int c = col_dist(rng);
  std::vector<std::pair<int, int>> visited{{r, c}};
  std::vector<std::string> edges;
  const auto seen = [&](int rr, int cc) {
    for (const auto& [vr, vc] : visited) {
      if (vr == rr && vc == cc) return true;
    }
    return false;
  };
  while (static_cast<int>(edges.size()) < target_edges) {
    struct Move {
      int dr, dc;
    };
    std::vector<Move> moves;
    for (const Move m : {Move{0, 1}, Move{0, -1}, Move{1, 0}, Move{-1, 0}}) {
      const int nr = r + m.dr;
      const int nc = c + m.dc;
      if (nr >= 0 && nr < rows && nc >= 0 && nc < cols && !seen(nr, nc)) {
        moves.push_back(m);
      }
    }
    if (moves.empty()) {
      break;
    }
    const Move m = moves[std::uniform_int_distribution<std::size_t>(
        0, moves.size() - 1)(rng)];
    const int nr = r + m.dr;
    const int nc = c + m.dc;
    std::string tag;
    if (m.dc == 1) tag = "h_" + std::to_string(r) + "_" + std::to_string(c) + "_f";
    if (m.dc == -1) tag = "h_" + std::to_string(r) + "_" + std::to_string(nc) + "_r";
    if (m.dr == 1) tag = "v_" + std::to_string(r) + "_" + std::to_string(c) + "_f";
    if (m.dr == -1) tag = "v_" + std::to_string(nr) + "_" + std::to_string(c) + "_r";
    edges.push_back(tag);
    visited.push_back({nr, nc});
    r = nr;
    c = nc;
  }
  if (static_cast<int>(edges.size()) < std::min(target_edges, 5)) {
    return {};
  }
  return edges;
}

/// Noisy arc-length samples along a chain of edges: every `step` meters
/// starting half a step in, which keeps samples clear of the junctions.
inline std::vector<CartPoint> sample_chain(const RoadNetwork& net,
                                           const std::vector<std::string>& chain,
                                           double step, double noise_bound,
                                           std::mt19937& rng) {
  std::vector<CartPoint> polyline;
  for (const std::string& id : chain) {
    const Edge& e = net.edge(id);
    if (polyline.empty()) {
      polyline.push_back(net.edge_from_pos(e));
    }
    polyline.push_back(net.edge_to_pos(e));
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    total += distance(polyline[i], polyline[i + 1]);
  }
  std::uniform_real_distribution<double> noise(-noise_bound, noise_bound);
  std::vector<CartPoint> samples;
  for (double arc = step / 2.0; arc <= total; arc += step) {
    double remaining = arc;
    CartPoint pos = polyline.front();
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
      const double leg = distance(polyline[i], polyline[i + 1]);
      if (remaining <= leg) {
        const double f = remaining / leg;
        pos = {polyline[i].x + f * (polyline[i + 1].x - polyline[i].x),
               polyline[i].y + f * (polyline[i + 1].y - polyline[i].y)};
        break;
      }
      remaining -= leg;
      pos = polyline[i + 1];
    }
    samples.push_back({pos.x + noise(rng), pos.y + noise(rng)});
  }
  return samples;
}

inline LineSpec line_from_points(const std::string& id,
                                 const std::vector<CartPoint>& points) {
  LineSpec line;
  line.line_id = id;
  for (const CartPoint& p : points) {
    line.itinerary.push_back(to_geographic(p, origin_ctx()));
  }
  return line;
}

}  // namespace emms::test

#endif  // EMMS_TESTS_FIXTURES_HPP
