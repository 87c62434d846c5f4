#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const char* kCli = EMMS_CLI_PATH;
const fs::path kScenarioDir = fs::path(EMMS_SOURCE_DIR) / "scenario";

int run(const std::string& args) {
  const int status = std::system((std::string(kCli) + " " + args +
                                  " >/dev/null 2>/dev/null")
                                     .c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("emms_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("missing network path is a usage error") {
  CHECK(run("match --net /no/such/net.xml --lines /no/such/line.json") == 2);
}

TEST_CASE("unknown flags are usage errors") {
  CHECK(run("analyze --frobnicate") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("bad sample interval is a usage error") {
  const fs::path dir = fresh_dir("badinterval");
  CHECK(run("simulate --net " + q(kScenarioDir / "net.xml") + " --matched " +
            q(dir) + " --sample-interval 0 --end 100") == 2);
}

TEST_CASE("full pipeline over the bundled scenario") {
  const fs::path out = fresh_dir("pipeline");
  const std::string scenario = q(kScenarioDir / "scenario.json");

  CHECK(run("match --scenario " + scenario + " --out " + q(out / "m")) == 0);
  CHECK(fs::exists(out / "m" / "routes.rou.xml"));
  CHECK(fs::exists(out / "m" / "stops.add.xml"));
  CHECK(fs::exists(out / "m" / "east_r0.match.json"));
  CHECK(fs::exists(out / "m" / "east_r0.conference.json"));

  // Byte determinism of the matching stage.
  CHECK(run("match --scenario " + scenario + " --out " + q(out / "m2")) == 0);
  CHECK(slurp(out / "m" / "routes.rou.xml") ==
        slurp(out / "m2" / "routes.rou.xml"));
  CHECK(slurp(out / "m" / "stops.add.xml") ==
        slurp(out / "m2" / "stops.add.xml"));

  CHECK(run("simulate --scenario " + scenario + " --matched " + q(out / "m") +
            " --out " + q(out / "trace.csv")) == 0);
  CHECK(run("simulate --scenario " + scenario + " --matched " + q(out / "m") +
            " --out " + q(out / "trace2.csv")) == 0);
  CHECK(slurp(out / "trace.csv") == slurp(out / "trace2.csv"));

  CHECK(run("analyze --trace " + q(out / "trace.csv") + " --out " +
            q(out / "a") + " --range 150 --perimeter 2000 --ref-x 0 --ref-y "
            "800") == 0);
  CHECK(fs::exists(out / "a" / "metrics_r150_p2000.csv"));
  CHECK(fs::exists(out / "a" / "summary_r150_p2000.json"));

  CHECK(run("report --summaries " + q(out / "a" / "summary_r150_p2000.json") +
            " --out " + q(out / "report.json")) == 0);
  CHECK(fs::exists(out / "report.json"));
  const std::string report = slurp(out / "report.json");
  CHECK(report.find("\"contact\"") != std::string::npos);
  CHECK(report.find("\"travel_time\"") != std::string::npos);
}

TEST_CASE("one unmatchable line of three still writes the others") {
  const fs::path out = fresh_dir("partial");
  // An itinerary far away from every edge cannot be matched.
  std::ofstream bad(out / "bad_line.json");
  bad << R"({"line_id": "bad", "route": [
    {"lat": 5.0, "lon": 5.0}, {"lat": 5.001, "lon": 5.0}],
    "stops": [], "departures": ["00:10:00"]})";
  bad.close();

  const int code =
      run("match --net " + q(kScenarioDir / "net.xml") + " --lines " +
          q(kScenarioDir / "lines" / "east_r0.json") + " " +
          q(kScenarioDir / "lines" / "west_r0.json") + " " +
          q(out / "bad_line.json") + " --out " + q(out / "m"));
  CHECK(code == 1);
  CHECK(fs::exists(out / "m" / "east_r0.match.json"));
  CHECK(fs::exists(out / "m" / "west_r0.match.json"));
  CHECK(fs::exists(out / "m" / "match_errors.json"));
  CHECK_FALSE(fs::exists(out / "m" / "bad.match.json"));
  CHECK(slurp(out / "m" / "match_errors.json").find("bad_line.json") !=
        std::string::npos);
}

TEST_CASE("analyze on an empty trace succeeds with empty outputs") {
  const fs::path out = fresh_dir("empty");
  std::ofstream trace(out / "empty.csv");
  trace << "t,vehicle_id,x,y\n";
  trace.close();
  CHECK(run("analyze --trace " + q(out / "empty.csv") + " --out " +
            q(out / "a") + " --range 150 --perimeter 2000") == 0);
  const std::string metrics = slurp(out / "a" / "metrics_r150_p2000.csv");
  CHECK(metrics == "metric,vehicle_id,t_or_start,value\n");
  const std::string summary = slurp(out / "a" / "summary_r150_p2000.json");
  CHECK(summary.find("\"contact\": null") != std::string::npos);
}

TEST_CASE("malformed trace fails with the row number") {
  const fs::path out = fresh_dir("malformed");
  std::ofstream trace(out / "bad.csv");
  trace << "t,vehicle_id,x,y\n0.00,a,1.00,2.00\nnot,a,valid\n";
  trace.close();
  CHECK(run("analyze --trace " + q(out / "bad.csv") + " --out " +
            q(out / "a")) == 1);
}

TEST_CASE("report rejects duplicate summaries") {
  const fs::path out = fresh_dir("dupes");
  std::ofstream s1(out / "s1.json");
  s1 << R"({"tx_range": 150.0, "perimeter_radius": 2000.0, "metrics": {}})";
  s1.close();
  fs::copy_file(out / "s1.json", out / "s2.json");
  CHECK(run("report --summaries " + q(out / "s1.json") + " " +
            q(out / "s2.json") + " --out " + q(out / "r.json")) == 1);
}

TEST_CASE("report without inputs is a usage error") {
  CHECK(run("report") == 2);
}

TEST_CASE("window without departures yields an empty trace") {
  const fs::path out = fresh_dir("emptywindow");
  const std::string scenario = q(kScenarioDir / "scenario.json");
  REQUIRE(run("match --scenario " + scenario + " --out " + q(out / "m")) == 0);
  // The bundled timetable ends before 23:00.
  CHECK(run("simulate --net " + q(kScenarioDir / "net.xml") + " --matched " +
            q(out / "m") + " --begin 82800 --end 82860 --out " +
            q(out / "trace.csv")) == 0);
  CHECK(slurp(out / "trace.csv") == "t,vehicle_id,x,y\n");
}

TEST_CASE("analyze reproduces the contact fixture from a trace document") {
  const fs::path out = fresh_dir("fig");
  std::ofstream trace(out / "fig.csv");
  trace << "t,vehicle_id,x,y\n"
           "0.00,A,0.00,0.00\n0.00,B,100.00,0.00\n0.00,C,1000.00,0.00\n"
           "3.00,A,0.00,0.00\n3.00,B,100.00,0.00\n3.00,C,1000.00,0.00\n"
           "6.00,A,0.00,0.00\n6.00,B,500.00,0.00\n6.00,C,100.00,0.00\n"
           "9.00,A,0.00,0.00\n9.00,B,1000.00,0.00\n9.00,C,900.00,0.00\n";
  trace.close();
  CHECK(run("analyze --trace " + q(out / "fig.csv") + " --out " + q(out / "a") +
            " --range 150 --perimeter 2000") == 0);
  const std::string metrics = slurp(out / "a" / "metrics_r150_p2000.csv");
  CHECK(metrics.find("contact,A,0.00,9.00") != std::string::npos);
  CHECK(metrics.find("contact,B,0.00,6.00") != std::string::npos);
  CHECK(metrics.find("inter_contact,B,6.00,3.00") != std::string::npos);
}

TEST_CASE("report emits a compatibility section from a real timetable") {
  const fs::path out = fresh_dir("compat");
  const std::string scenario = q(kScenarioDir / "scenario.json");
  REQUIRE(run("match --scenario " + scenario + " --out " + q(out / "m")) == 0);
  REQUIRE(run("simulate --scenario " + scenario + " --matched " + q(out / "m") +
              " --out " + q(out / "trace.csv")) == 0);
  REQUIRE(run("analyze --trace " + q(out / "trace.csv") + " --out " +
              q(out / "a") + " --range 150 --perimeter 2000 --ref-x 0 "
              "--ref-y 800") == 0);
  REQUIRE(run("report --summaries " +
              q(out / "a" / "summary_r150_p2000.json") + " --metrics " +
              q(out / "a" / "metrics_r150_p2000.csv") + " --real " +
              q(kScenarioDir / "real_times.json") + " --out " +
              q(out / "report.json")) == 0);
  const std::string report = slurp(out / "report.json");
  CHECK(report.find("\"compatibility\"") != std::string::npos);
  CHECK(report.find("\"percentage\"") != std::string::npos);
}
