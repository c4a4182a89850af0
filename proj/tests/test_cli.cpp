#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "conformal/cli/config.hpp"
#include "conformal/cli/csv.hpp"
#include "conformal/cli/runner.hpp"

using namespace conformal;
using namespace conformal::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("conformal_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& content) {
  const auto p = dir / name;
  write_text_atomic(p, content);
  return p;
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "conformal");
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

json base_config(const std::string& method, const std::string& out) {
  json j;
  j["method"] = method;
  j["seed"] = 5;
  j["out"] = out;
  json gen;
  if (method == "split") {
    gen = {{"kind", "iid_regression"}, {"n", 120}};
  } else if (method == "enbpi" || method == "aci") {
    gen = {{"kind", "ar1"}, {"n", 160}};
  } else if (method == "cfrnn" || method == "copulacpts") {
    gen = {{"kind", "multi_horizon"}, {"n", 60}, {"t_in", 4}, {"horizon", 3}};
  } else {
    gen = {{"kind", "safety_scores"}, {"n", 200}};
  }
  j["data"]["generator"] = gen;
  if (method != "warning") j["model"] = {{"kind", "linear"}};
  if (method == "copulacpts" || method == "warning") j["epsilon"] = 0.1;
  else j["alpha"] = 0.1;
  if (method == "enbpi") j["enbpi"] = {{"ensemble", 5}, {"window", 5}};
  if (method == "aci") j["aci"] = {{"gamma", 0.01}};
  return j;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double v = gauss(rng) * std::pow(10.0, i % 17 - 8);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("atomic writes create directories and leave no temp files") {
  TempDir tmp;
  const auto target = tmp.path / "a" / "b" / "file.txt";
  write_text_atomic(target, "hello\n");
  CHECK(read_text(target) == "hello\n");
  write_text_atomic(target, "replaced");
  CHECK(read_text(target) == "replaced");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  CHECK_THROWS_AS((void)read_text(tmp.path / "missing.txt"), DataError);
}

TEST_CASE("series csv reader accepts the documented layout") {
  TempDir tmp;
  const auto p = write_file(tmp.path, "s.csv",
                            "t,x1,x2,y1\n"
                            "0, 1.0 ,2.0,3.0\n"
                            "1,4.0,5.0,6.0\n");
  const auto data = read_series_csv(p);
  REQUIRE(data.size() == 2);
  CHECK(data.feature_dim() == 2);
  CHECK(data.target_dim() == 1);
  CHECK(data.x(0)[1] == 2.0);
  CHECK(data.y(1)[0] == 6.0);

  // Featureless series and multi-target rows are both legal.
  const auto p2 = write_file(tmp.path, "s2.csv", "t,y1,y2\n0,1,2\n1,3,4\n");
  const auto d2 = read_series_csv(p2);
  CHECK(d2.feature_dim() == 0);
  CHECK(d2.target_dim() == 2);
}

TEST_CASE("series csv reader rejects malformed input") {
  TempDir tmp;
  CHECK_THROWS_AS((void)read_series_csv(tmp.path / "nope.csv"), DataError);

  const auto ragged = write_file(tmp.path, "r.csv", "t,x1,y1\n0,1,2\n1,2\n");
  CHECK_THROWS_AS((void)read_series_csv(ragged), DataError);

  const auto text = write_file(tmp.path, "a.csv", "t,x1,y1\n0,1.5x,2\n");
  CHECK_THROWS_AS((void)read_series_csv(text), DataError);

  const auto inf = write_file(tmp.path, "i.csv", "t,x1,y1\n0,inf,2\n");
  CHECK_THROWS_AS((void)read_series_csv(inf), DataError);

  const auto no_y = write_file(tmp.path, "n.csv", "t,x1\n0,1\n");
  CHECK_THROWS_AS((void)read_series_csv(no_y), DataError);

  const auto bad_first = write_file(tmp.path, "b.csv", "x1,y1\n1,2\n");
  CHECK_THROWS_AS((void)read_series_csv(bad_first), DataError);

  const auto empty_body = write_file(tmp.path, "e.csv", "t,y1\n");
  CHECK_THROWS_AS((void)read_series_csv(empty_body), DataError);
}

TEST_CASE("long-format trajectories group by contiguous series id") {
  TempDir tmp;
  const auto p = write_file(tmp.path, "m.csv",
                            "series_id,t,y\n"
                            "a,0,1\na,1,2\na,2,3\n"
                            "b,0,10\nb,1,20\nb,2,30\n");
  const auto ms = read_multi_series_csv(p);
  REQUIRE(ms.ids.size() == 2);
  CHECK(ms.ids[0] == "a");
  CHECK(ms.series[1][2] == 30.0);

  const auto win = windows_from_series(ms, 2, 1);
  REQUIRE(win.size() == 2);
  CHECK(win.x(0)[0] == 1.0);
  CHECK(win.y(0)[0] == 3.0);
  CHECK(win.y(1)[0] == 30.0);

  // Longer series use their prefix; shorter ones are an error.
  CHECK_NOTHROW((void)windows_from_series(ms, 1, 1));
  CHECK_THROWS_AS((void)windows_from_series(ms, 3, 1), DataError);

  const auto split_id = write_file(tmp.path, "bad.csv",
                                   "series_id,t,y\na,0,1\nb,0,2\na,1,3\n");
  CHECK_THROWS_AS((void)read_multi_series_csv(split_id), DataError);

  const auto wrong = write_file(tmp.path, "w.csv", "id,t,y\na,0,1\n");
  CHECK_THROWS_AS((void)read_multi_series_csv(wrong), DataError);
}

TEST_CASE("safety csv reader") {
  TempDir tmp;
  const auto p = write_file(tmp.path, "s.csv", "phi,phi_hat\n-1.0,-0.5\n2.0,1.5\n");
  const auto recs = read_safety_csv(p);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].phi == -1.0);
  CHECK(recs[1].phi_hat == 1.5);
  const auto wrong = write_file(tmp.path, "w.csv", "phi,pred\n1,2\n");
  CHECK_THROWS_AS((void)read_safety_csv(wrong), DataError);
}

TEST_CASE("every method has a minimal valid config") {
  for (const auto* method :
       {"split", "enbpi", "aci", "cfrnn", "copulacpts", "warning"}) {
    const auto diags = validate_config(base_config(method, "out"));
    CAPTURE(method);
    CHECK(diags.empty());
  }
}

TEST_CASE("validation pinpoints each configuration mistake") {
  const auto has_diag = [](const json& j, const std::string& needle) {
    for (const auto& d : validate_config(j)) {
      if (d.find(needle) != std::string::npos) return true;
    }
    return false;
  };

  auto j = base_config("split", "out");
  j["typo_key"] = 1;
  CHECK(has_diag(j, "unknown key 'typo_key'"));

  j = base_config("split", "out");
  j["alpha"] = 1.5;
  CHECK(has_diag(j, "alpha must lie in (0, 1)"));

  j = base_config("aci", "out");
  j["aci"]["gamma"] = -0.5;
  CHECK(has_diag(j, "aci.gamma must be >= 0"));

  j = base_config("warning", "out");
  j["model"] = {{"kind", "linear"}};
  CHECK(has_diag(j, "warning takes no model"));

  j = base_config("split", "out");
  j.erase("alpha");
  j["epsilon"] = 0.1;  // split budgets through alpha
  CHECK(has_diag(j, "'epsilon'"));

  j = base_config("split", "out");
  j["data"]["generator"] = {{"kind", "multi_horizon"}, {"n", 50}};
  CHECK(has_diag(j, "multi_horizon generator requires a multi-horizon method"));

  j = base_config("cfrnn", "out");
  j["multihorizon"] = {{"t_in", 4}};
  CHECK(has_diag(j, "come from the generator"));

  j = base_config("split", "out");
  j["score"] = "quantile_band";
  CHECK(has_diag(j, "requires model.kind 'quantile'"));

  j = base_config("split", "out");
  j["data"] = {{"path", "x.csv"}, {"generator", {{"kind", "ar1"}, {"n", 10}}}};
  CHECK(has_diag(j, "exactly one of 'path' or 'generator'"));

  j = json::object();
  CHECK(has_diag(j, "method is required"));
  CHECK(has_diag(json::array(), "config root must be a JSON object"));

  j = base_config("enbpi", "out");
  j["enbpi"]["aggregation"] = "mode";
  CHECK(has_diag(j, "enbpi.aggregation must be 'mean' or 'median'"));

  j = base_config("cfrnn", "out");
  j["data"]["generator"]["t_in"] = 1;
  CHECK(has_diag(j, "t_in must be >= 2"));
}

TEST_CASE("parse_config throws the same diagnostics validate reports") {
  auto j = base_config("split", "out");
  j["alpha"] = 0.0;
  j["bogus"] = true;
  const auto diags = validate_config(j);
  REQUIRE_FALSE(diags.empty());
  try {
    (void)parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.diagnostics() == diags);
    CHECK(std::string(e.what()) == diags.front());
  }
}

TEST_CASE("resolved configs are a fixed point of parse and serialize") {
  for (const auto* method :
       {"split", "enbpi", "aci", "cfrnn", "copulacpts", "warning"}) {
    CAPTURE(method);
    const auto cfg = parse_config(base_config(method, "out"));
    const json once = config_to_json(cfg);
    CHECK(validate_config(once).empty());
    const json twice = config_to_json(parse_config(once));
    CHECK(once == twice);
  }
}

TEST_CASE("runs are deterministic and write every artifact") {
  TempDir tmp;
  const auto out_a = (tmp.path / "a").string();
  const auto out_b = (tmp.path / "b").string();
  auto cfg_a = base_config("split", out_a);
  auto cfg_b = base_config("split", out_b);

  run_experiment(parse_config(cfg_a));
  run_experiment(parse_config(cfg_b));

  for (const auto* name : {"manifest.json", "metrics.json", "intervals.csv",
                           "plotdata.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(fs::path(out_a) / name));
    const auto a = read_text(fs::path(out_a) / name);
    const auto b = read_text(fs::path(out_b) / name);
    if (std::string(name) == "manifest.json") {
      // Manifests differ only in the output directory they record.
      auto ja = json::parse(a);
      auto jb = json::parse(b);
      ja["config"].erase("out");
      jb["config"].erase("out");
      CHECK(ja == jb);
    } else {
      CHECK(a == b);
    }
  }

  const auto metrics = json::parse(read_text(fs::path(out_a) / "metrics.json"));
  const double cov = metrics.at("coverage").get<double>();
  CHECK(cov >= 0.0);
  CHECK(cov <= 1.0);
  const auto manifest = json::parse(read_text(fs::path(out_a) / "manifest.json"));
  CHECK(manifest.at("tool") == "conformal");
  CHECK(manifest.at("config").at("method") == "split");
}

TEST_CASE("the manifest config reproduces the run byte for byte") {
  TempDir tmp;
  const auto out1 = (tmp.path / "one").string();
  run_experiment(parse_config(base_config("copulacpts", out1)));

  auto replay = json::parse(read_text(fs::path(out1) / "manifest.json")).at("config");
  const auto out2 = (tmp.path / "two").string();
  replay["out"] = out2;
  run_experiment(parse_config(replay));

  CHECK(read_text(fs::path(out1) / "metrics.json") ==
        read_text(fs::path(out2) / "metrics.json"));
  CHECK(read_text(fs::path(out1) / "intervals.csv") ==
        read_text(fs::path(out2) / "intervals.csv"));
}

TEST_CASE("json interval format replaces the csv artifact") {
  TempDir tmp;
  const auto out = (tmp.path / "j").string();
  auto j = base_config("aci", out);
  j["format"] = "json";
  run_experiment(parse_config(j));
  CHECK(fs::exists(fs::path(out) / "intervals.json"));
  CHECK_FALSE(fs::exists(fs::path(out) / "intervals.csv"));
  const auto rows = json::parse(read_text(fs::path(out) / "intervals.json"));
  REQUIRE(rows.is_array());
  REQUIRE_FALSE(rows.empty());
  CHECK(rows.front().contains("lo"));
  CHECK(rows.front().contains("hi"));
}

TEST_CASE("command line exit codes separate the failure classes") {
  TempDir tmp;

  // 0: a valid run.
  const auto good = base_config("split", (tmp.path / "run").string());
  const auto good_path = write_file(tmp.path, "good.json", good.dump());
  CHECK(run_args({"split", "--config", good_path.string()}) == kExitOk);
  CHECK(fs::exists(tmp.path / "run" / "metrics.json"));

  // 0/2: validate reports rather than runs.
  CHECK(run_args({"validate", "--config", good_path.string()}) == kExitOk);
  auto bad = good;
  bad["alpha"] = 2.0;
  const auto bad_path = write_file(tmp.path, "bad.json", bad.dump());
  CHECK(run_args({"validate", "--config", bad_path.string()}) == kExitConfigError);
  CHECK(run_args({"split", "--config", bad_path.string()}) == kExitConfigError);

  // 2: unreadable config, not-JSON config, method/subcommand mismatch,
  // unknown subcommand, missing required option.
  CHECK(run_args({"split", "--config", (tmp.path / "none.json").string()}) ==
        kExitConfigError);
  const auto not_json = write_file(tmp.path, "nj.json", "{broken");
  CHECK(run_args({"split", "--config", not_json.string()}) == kExitConfigError);
  CHECK(run_args({"aci", "--config", good_path.string()}) == kExitConfigError);
  CHECK(run_args({"frobnicate", "--config", good_path.string()}) == kExitConfigError);
  CHECK(run_args({"split"}) == kExitConfigError);

  // 3: well-formed config pointing at bad data.
  auto missing_data = base_config("split", (tmp.path / "r2").string());
  missing_data["data"] = {{"path", (tmp.path / "absent.csv").string()}};
  const auto md_path = write_file(tmp.path, "md.json", missing_data.dump());
  CHECK(run_args({"split", "--config", md_path.string()}) == kExitDataError);

  auto ragged = base_config("split", (tmp.path / "r3").string());
  const auto ragged_csv = write_file(tmp.path, "ragged.csv", "t,x1,y1\n0,1\n");
  ragged["data"] = {{"path", ragged_csv.string()}};
  const auto rg_path = write_file(tmp.path, "rg.json", ragged.dump());
  CHECK(run_args({"split", "--config", rg_path.string()}) == kExitDataError);
}

TEST_CASE("command line overrides rewrite seed, out, and format") {
  TempDir tmp;
  auto j = base_config("split", (tmp.path / "ignored").string());
  const auto cfg_path = write_file(tmp.path, "cfg.json", j.dump());
  const auto out = (tmp.path / "actual").string();

  CHECK(run_args({"split", "--config", cfg_path.string(), "--seed", "99", "--out",
                  out, "--format", "json"}) == kExitOk);
  CHECK_FALSE(fs::exists(tmp.path / "ignored"));
  const auto manifest = json::parse(read_text(fs::path(out) / "manifest.json"));
  CHECK(manifest.at("config").at("seed").get<std::uint64_t>() == 99);
  CHECK(manifest.at("config").at("format") == "json");
  CHECK(fs::exists(fs::path(out) / "intervals.json"));

  // The generator inherits the overridden seed, so the data changes.
  const auto out2 = (tmp.path / "actual2").string();
  CHECK(run_args({"split", "--config", cfg_path.string(), "--seed", "100", "--out",
                  out2, "--format", "json"}) == kExitOk);
  CHECK(read_text(fs::path(out) / "intervals.json") !=
        read_text(fs::path(out2) / "intervals.json"));
}
