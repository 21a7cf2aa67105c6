#include <gtest/gtest.h>

#include <sys/wait.h>

#include "gate/cli/evaluate.hpp"
#include "gate/cli/pipeline.hpp"

namespace gate::cli {
namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int n = 0;
    path = fs::temp_directory_path() / ("gate_cli_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), root).string()] = {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  return out;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::io;
}

GateConfig cfg_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

TEST(Config, SectionsBindToStageParameters) {
  const auto c = cfg_from(
      "# comment\n[wagonid]\nd = 256\ns = 64\n[thermal]\nthreshold_c = 120.5\n[pantograph]\nratio = 0.6\nexact_index = true\n"
      "[synth]\nwagon_id = \"123456789012\"\nhotspot_position = [0.2, 0.8]\nhotspot_temp_c = [300, 400]\n");
  EXPECT_EQ(c.wagonid.d, 256);
  EXPECT_EQ(c.wagonid.s, 64);
  EXPECT_DOUBLE_EQ(c.thermal.threshold_c, 120.5);
  EXPECT_DOUBLE_EQ(c.pantograph.ratio, 0.6);
  EXPECT_TRUE(c.pantograph.exact_index);
  EXPECT_EQ(c.scenario.wagon_id, "123456789012");
  ASSERT_EQ(c.scenario.hotspots.size(), 2u);
  EXPECT_DOUBLE_EQ(c.scenario.hotspots[1].position, 0.8);
  EXPECT_DOUBLE_EQ(c.scenario.hotspots[1].temp_c, 400);
  EXPECT_EQ(c.scenario.hotspots[1].row, synth::HotspotSpec{}.row);
}

TEST(Config, DefaultsAndEmptyFile) {
  const auto c = cfg_from("");
  EXPECT_EQ(c.wagonid.d, wagonid::SegmentationParams{}.d);
  EXPECT_EQ(c.scenario.hotspots.size(), 1u);
  EXPECT_EQ(cfg_from("[synth]\nhotspot_position = []\n").scenario.hotspots.size(), 0u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(code_of([] { cfg_from("[synth]\nbogus = 1\n"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { cfg_from("[wagonid]\nd = abc\n"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { cfg_from("[wagonid]\ns = 1024\n"); }), Errc::invalid_argument);  // s > d
  EXPECT_EQ(code_of([] { cfg_from("[synth]\nwagon_id = \"12\"\n"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { cfg_from("[synth]\nhotspot_temp_c = [900]\n"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { cfg_from("[synth]\nhotspot_row = [1, 2]\nhotspot_temp_c = [300]\n"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { cfg_from("[pantograph]\nexact_index = maybe\n"); }), Errc::invalid_argument);
}

TEST(Synth, DeterministicPerSeed) {
  TempDir tmp;
  auto spec = GateConfig::default_scenario();
  spec.seed = 11;
  write_raw(spec, tmp.path / "a");
  write_raw(spec, tmp.path / "b");
  EXPECT_EQ(tree_bytes(tmp.path / "a"), tree_bytes(tmp.path / "b"));
  spec.seed = 12;
  write_raw(spec, tmp.path / "c");
  EXPECT_NE(tree_bytes(tmp.path / "a"), tree_bytes(tmp.path / "c"));
}

TEST(Synth, TruthListsTwelveGlyphsAndOneHotBlock) {
  TempDir tmp;
  auto spec = GateConfig::default_scenario();
  spec.seed = 2;
  const auto t = write_raw(spec, tmp.path);
  EXPECT_EQ(t.glyph_boxes.size(), 12u);
  EXPECT_EQ(t.wagon_id.size(), 12u);
  EXPECT_EQ(t.hot_left.size(), 1u);
  EXPECT_EQ(t.hot_right.size(), 1u);
  const auto back = read_truth(tmp.path);
  EXPECT_EQ(back.glyph_boxes, t.glyph_boxes);
  EXPECT_EQ(back.hot_left, t.hot_left);
  EXPECT_EQ(back.pantograph_box, t.pantograph_box);
  const auto p = read_passage(tmp.path);
  EXPECT_EQ(p.id, "passage-2");
  EXPECT_EQ(p.clocks.at("side-low").rate_hz, 18'500u);
  EXPECT_EQ(p.clocks.at("frontal").rate_hz, 300u);
  EXPECT_EQ(p.clocks.at("thermal-left").rate_hz, 512u);
}

struct Processed {
  TempDir tmp;
  Truth truth;
  session::SessionManifest manifest;
  Processed(synth::ScenarioSpec spec, std::uint64_t seed = 1) {
    truth = write_raw(spec, tmp.path / "raw");
    RunOptions o;
    o.seed = seed;
    manifest = run_pipeline(tmp.path / "raw", tmp.path / "sessions", o);
  }
  Json doc(const std::string& kind) const {
    return read_json(tmp.path / "sessions" / manifest.id / manifest.detections.at(kind));
  }
};

TEST(Pipeline, SyntheticScenarioProducesCompleteSession) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 4;
  Processed p(spec);
  EXPECT_EQ(p.manifest.streams.size(), 5u);
  for (const char* kind : {"wagon_id", "thermal", "pantograph"}) EXPECT_TRUE(p.manifest.detections.count(kind)) << kind;
  EXPECT_EQ(p.doc("wagon_id")["status"], "ok");
  EXPECT_TRUE(p.doc("pantograph")["found"].get<bool>());
  EXPECT_EQ(p.doc("thermal")["cross_check"]["status"], "pass");
  EXPECT_EQ(session::load_session(p.tmp.path / "sessions", p.manifest.id), p.manifest);
}

TEST(Pipeline, NoPantographStillCompletes) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 5;
  spec.pantograph.present = false;
  Processed p(spec);
  EXPECT_FALSE(p.doc("pantograph")["found"].get<bool>());
  EXPECT_EQ(p.manifest.streams.size(), 5u);
}

TEST(Pipeline, MissingRightChainMarksCrossCheckUnavailable) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 6;
  spec.thermal_right_present = false;
  Processed p(spec);
  const auto t = p.doc("thermal");
  EXPECT_EQ(t["cross_check"]["status"], "unavailable");
  EXPECT_EQ(t["chains"].size(), 1u);
  EXPECT_EQ(p.manifest.stream("thermal-right"), nullptr);
  EXPECT_NE(p.manifest.stream("thermal-left"), nullptr);
}

TEST(Pipeline, StageFailureNamesTheStage) {
  TempDir tmp;
  auto spec = GateConfig::default_scenario();
  write_raw(spec, tmp.path / "raw");
  fs::remove(tmp.path / "raw" / "side-high.pgm");
  try {
    run_pipeline(tmp.path / "raw", tmp.path / "out", {});
    FAIL() << "expected a stage failure";
  } catch (const StageFailure& e) {
    EXPECT_EQ(e.stage(), "pantograph");
  }
  EXPECT_FALSE(fs::exists(tmp.path / "out" / "passage-1"));
}

TEST(Pipeline, ByteIdenticalAcrossRuns) {
  TempDir tmp;
  auto spec = GateConfig::default_scenario();
  spec.seed = 7;
  write_raw(spec, tmp.path / "raw");
  RunOptions o;
  o.seed = 7;
  run_pipeline(tmp.path / "raw", tmp.path / "a", o);
  run_pipeline(tmp.path / "raw", tmp.path / "b", o);
  const auto a = tree_bytes(tmp.path / "a"), b = tree_bytes(tmp.path / "b");
  EXPECT_GT(a.size(), 20u);
  EXPECT_EQ(a, b);
}

TEST(Evaluate, PerfectBatchAndReportLayout) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 8;
  Processed p(spec);
  const auto r = evaluate_sessions(p.tmp.path / "sessions", {p.tmp.path / "raw"});
  EXPECT_EQ(r.sessions, 1);
  EXPECT_EQ(r.wagon.chars.tp, 12);
  EXPECT_EQ(r.wagon.chars.fn, 0);
  EXPECT_EQ(r.wagon.full_id.tp, 1);
  EXPECT_EQ(r.pantograph.detected, 1);
  EXPECT_EQ(r.thermal_exact, 2);
  const auto text = format_report(r);
  EXPECT_NE(text.find("Accuracy | FN Rate | FP Rate"), std::string::npos);
  EXPECT_EQ(to_json(r)["wagon_id"]["characters"]["accuracy"], 100.0);
}

TEST(Evaluate, MergedGlyphsCountAsOneHitOneMiss) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 9;
  spec.touching_pair = 3;
  Processed p(spec);
  const auto r = evaluate_sessions(p.tmp.path / "sessions", {p.tmp.path / "raw"});
  EXPECT_EQ(r.wagon.chars.tp, 11);
  EXPECT_EQ(r.wagon.chars.fn, 1);
  EXPECT_NEAR(r.wagon.chars.fn_rate(), 100.0 / 12, 1e-9);
  EXPECT_EQ(r.wagon.full_id.fn, 1);
}

TEST(Evaluate, MisalignedPairsAreRejected) {
  auto spec = GateConfig::default_scenario();
  spec.seed = 10;
  Processed p(spec);
  TempDir other;
  spec.seed = 99;
  write_raw(spec, other.path);
  EXPECT_EQ(code_of([&] { evaluate_sessions(p.tmp.path / "sessions", {other.path}); }), Errc::mismatched_input);
  EXPECT_EQ(code_of([&] { evaluate_sessions(p.tmp.path / "sessions", {p.tmp.path / "raw", p.tmp.path / "raw"}); }),
            Errc::mismatched_input);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GATE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

TEST(Binary, ExitCodes) {
  TempDir tmp;
  const auto d = tmp.path.string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("synth"), 2);  // --out missing
  {
    std::ofstream(tmp.path / "bad.toml") << "[synth]\nnope = 1\n";
  }
  EXPECT_EQ(run_cli("synth --config " + d + "/bad.toml --out " + d + "/x"), 2);
  EXPECT_EQ(run_cli("synth --seed 3 --out " + d + "/raw"), 0);
  fs::remove(tmp.path / "raw" / "side-low.pgm");
  EXPECT_EQ(run_cli("run --in " + d + "/raw --out " + d + "/s"), 3);
  EXPECT_EQ(run_cli("tile --in " + d + "/raw/side-high.pgm --out " + d + "/tiles"), 0);
  EXPECT_TRUE(fs::exists(tmp.path / "tiles" / "pyramid.json"));
  EXPECT_EQ(run_cli("build-model --out " + d + "/m.pgfm"), 0);
  EXPECT_EQ(run_cli("detect-pantograph --in " + d + "/raw/side-high.pgm --model " + d + "/m.pgfm --out " + d + "/det.json"), 0);
  EXPECT_TRUE(read_json(tmp.path / "det.json")["found"].get<bool>());
  EXPECT_EQ(run_cli("thermal-scan --left " + d + "/raw/thermal-left.tlines --right " + d + "/raw/thermal-right.tlines --out " + d +
                    "/th.json --preview " + d + "/th.ppm"),
            0);
  EXPECT_EQ(read_json(tmp.path / "th.json")["cross_check"]["status"], "pass");
  EXPECT_EQ(run_cli("thermal-scan --left " + d + "/raw/thermal-left.tlines --range 100 50 --preview " + d + "/p.ppm --out " + d +
                    "/th2.json"),
            2);
}

}  // namespace
}  // namespace gate::cli
