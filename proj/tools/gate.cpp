// gate: command-line entry point for the portal pipelines.
//
// Exit codes: 0 success, 2 validation error (bad arguments, config or input documents),
// 3 pipeline stage failure.

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gate/acquisition.hpp"
#include "gate/cli/evaluate.hpp"
#include "gate/cli/pipeline.hpp"
#include "gate/session.hpp"

namespace {

using namespace gate;
namespace fs = std::filesystem;

constexpr int kExitValidation = 2;
constexpr int kExitStage = 3;

bool is_validation(Errc c) {
  switch (c) {
    case Errc::invalid_argument:
    case Errc::parse:
    case Errc::version_mismatch:
    case Errc::out_of_range:
    case Errc::mismatched_input: return true;
    default: return false;
  }
}

struct Common {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string config;
  std::string out;

  cli::GateConfig load() const {
    auto cfg = config.empty() ? cli::GateConfig{} : cli::load_config(config);
    if (seed_given) cfg.scenario.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void write_doc(const std::string& path, const Json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_json(path, doc);
  }
}

std::atomic<bool> g_stop{false};
httplib::Server* g_server = nullptr;

void on_signal(int) {
  g_stop = true;
  if (g_server) g_server->stop();
}

int cmd_synth(const Common& c, int count) {
  const auto cfg = c.load();
  if (count < 1) throw Error(Errc::invalid_argument, "--count must be >= 1");
  for (int i = 0; i < count; ++i) {
    auto spec = cfg.scenario;
    spec.seed = cfg.scenario.seed + static_cast<std::uint64_t>(i);
    const fs::path dir = count == 1 ? fs::path(c.out) : fs::path(c.out) / cli::passage_id(spec.seed);
    const auto t = cli::write_raw(spec, dir);
    std::cout << dir.string() << ": wagon " << t.wagon_id << ", " << t.hot_left.size() << " hot block(s) left, pantograph "
              << (t.pantograph_present ? "present" : "absent") << '\n';
  }
  return 0;
}

int cmd_segment(const Common& c, const std::string& in) {
  const auto cfg = c.load();
  const auto img = pnm::read_pgm(in);
  const auto doc = cli::run_stage("wagon-id", [&] { return cli::wagon_id_document(img, cfg.wagonid, cfg.scenario.seed); });
  write_doc(c.out, doc);
  return doc.at("status") == "ok" ? 0 : kExitStage;
}

int cmd_thermal(const Common& c, const std::string& left, const std::string& right, const std::string& preview,
                std::vector<double> range) {
  const auto cfg = c.load();
  const auto l = cli::run_stage("thermal", [&] { return cli::load_chain(left); });
  std::optional<thermal::ThermalMosaic> r;
  if (!right.empty()) r = cli::run_stage("thermal", [&] { return cli::load_chain(right); });
  const auto& t = cfg.thermal;
  const auto report = thermal::analyze_passage(l, r ? &*r : nullptr, t.block_w, t.block_h, t.threshold_c, t.tolerance_c);
  write_doc(c.out, thermal::to_json(report));
  if (!preview.empty()) {
    const auto img = range.empty() ? thermal::colorize(l) : thermal::colorize(l, range.at(0), range.at(1));
    pnm::write_ppm(preview, img);
  }
  return 0;
}

int cmd_detect(const Common& c, const std::string& in, const std::string& model) {
  const auto cfg = c.load();
  cli::RunOptions o{cfg, cfg.scenario.seed, std::nullopt, model.empty() ? std::nullopt : std::optional<fs::path>(model)};
  const auto scene = pnm::read_pgm(in);
  const auto det = cli::run_stage("pantograph", [&] {
    return pantograph::detect_pantograph(scene, cli::pantograph_model(o), cfg.pantograph, o.seed);
  });
  write_doc(c.out, pantograph::to_json(det));
  return 0;
}

int cmd_build_model(const Common& c, const std::string& in) {
  const auto cfg = c.load();
  if (c.out.empty()) throw Error(Errc::invalid_argument, "--out is required");
  const auto templ = in.empty() ? synth::pantograph_template() : pnm::read_pgm(in);
  const auto models = cli::run_stage("pantograph", [&] { return pantograph::build_model_set(templ, cfg.pantograph.sift); });
  pantograph::write_models(c.out, models);
  std::cout << c.out << ":";
  for (std::size_t i = 0; i < models.size(); ++i)
    std::cout << " gain " << pantograph::kIlluminationGains[i] << " " << models[i].keypoints.size() << " keypoints;";
  std::cout << '\n';
  return 0;
}

int cmd_run(const Common& c, const std::string& in, const std::string& id, const std::string& model) {
  cli::RunOptions o;
  o.config = c.load();
  o.seed = o.config.scenario.seed;
  if (!id.empty()) o.session_id = id;
  if (!model.empty()) o.model_path = model;
  if (c.out.empty()) throw Error(Errc::invalid_argument, "--out is required");
  const auto m = cli::run_pipeline(in, c.out, o);
  std::cout << (fs::path(c.out) / m.id).string() << ": " << m.streams.size() << " streams, " << m.detections.size()
            << " detection documents\n";
  return 0;
}

int cmd_tile(const Common& c, const std::string& in) {
  if (c.out.empty()) throw Error(Errc::invalid_argument, "--out is required");
  const auto l = session::write_pyramid_from_pgm(in, c.out);
  std::cout << c.out << ": " << l.level_count() << " levels, " << l.levels[0].cols << "x" << l.levels[0].rows
            << " tiles at level 0\n";
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& sessions, std::vector<std::string> truth, const std::string& raw_root,
                 double iou_threshold) {
  std::vector<fs::path> dirs(truth.begin(), truth.end());
  if (!raw_root.empty()) {
    std::vector<fs::path> found;
    for (const auto& e : fs::directory_iterator(raw_root))
      if (e.is_directory() && fs::exists(e.path() / "truth.json")) found.push_back(e.path());
    std::sort(found.begin(), found.end());
    dirs.insert(dirs.end(), found.begin(), found.end());
  }
  if (dirs.empty()) throw Error(Errc::invalid_argument, "no ground truth given (--truth or --raw-root)");
  const auto r = cli::evaluate_sessions(sessions, dirs, iou_threshold);
  if (!c.out.empty()) write_doc(c.out, cli::to_json(r));
  std::cout << cli::format_report(r);
  return 0;
}

int cmd_serve(const std::string& sessions, const std::string& bind_override, bool local_fleet) {
  auto settings = acquisition::settings_from_env();
  if (!bind_override.empty()) settings.bind = http::parse_bind(bind_override);
  acquisition::WallClock clock;
  acquisition::LocalFleet fleet(clock);
  acquisition::ManagerConfig mc;
  mc.heartbeat_period_us = static_cast<std::int64_t>(settings.heartbeat_secs * 1e6);
  acquisition::AcquisitionManager manager(clock, acquisition::http_forwarder(&fleet), mc);
  if (local_fleet) {
    for (const auto& d : acquisition::reference_fleet()) fleet.add(d);
    fleet.register_all(manager);
  }

  httplib::Server srv;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  acquisition::mount_acquisition(srv, manager);
  session::mount_sessions(srv, sessions);

  std::thread beat([&] {
    while (!g_stop) {
      for (auto& s : fleet.servers()) s->tick();
      fleet.beat(manager);
      std::this_thread::sleep_for(std::chrono::microseconds(mc.heartbeat_period_us));
    }
  });
  g_server = &srv;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving on http://" << settings.bind.host << ':' << settings.bind.port << " (sessions: " << sessions << ")"
            << std::endl;
  const bool ok = srv.listen(settings.bind.host, settings.bind.port);
  g_stop = true;
  beat.join();
  if (!ok && !g_server) return 0;
  g_server = nullptr;
  if (!ok) throw Error(Errc::io, "cannot listen on " + settings.bind.host + ":" + std::to_string(settings.bind.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Railway portal machine-vision pipelines"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool out_required, const std::string& config_names = "--config") {
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { common.seed = s, common.seed_given = true; },
                                            "RNG seed (default 1)");
    sub->add_option(config_names, common.config, "TOML-shaped config file")->check(CLI::ExistingFile);
    auto* o = sub->add_option("--out", common.out, "output path");
    if (out_required) o->required();
  };

  int count = 1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic passage (raw streams + ground truth)");
  add_common(synth, true);
  synth->add_option("--count", count, "number of passages (seeds seed..seed+count-1, one subdirectory each)");

  std::string in;
  auto* seg = app.add_subcommand("segment-id", "locate the wagon identifier in a side mosaic");
  add_common(seg, false, "--config,--params");
  seg->add_option("--in,--input", in, "side mosaic (PGM)")->required()->check(CLI::ExistingFile);

  std::string left, right, preview;
  std::vector<double> range;
  auto* therm = app.add_subcommand("thermal-scan", "block statistics, alarms and cross-check of thermal chains");
  add_common(therm, false);
  therm->add_option("--left", left, "left chain (.tlines)")->required()->check(CLI::ExistingFile);
  therm->add_option("--right", right, "right chain (.tlines)")->check(CLI::ExistingFile);
  therm->add_option("--preview", preview, "write a false-color PPM of the left chain");
  therm->add_option("--range", range, "false-color range lo hi (°C)")->expected(2);

  std::string model;
  auto* det = app.add_subcommand("detect-pantograph", "find the pantograph in a roof mosaic");
  add_common(det, false);
  det->add_option("--in,--scene", in, "roof mosaic (PGM)")->required()->check(CLI::ExistingFile);
  det->add_option("--model", model, "feature model set (PGFM1 records); default: built-in template")->check(CLI::ExistingFile);

  auto* bm = app.add_subcommand("build-model", "extract and save the pantograph template feature model");
  add_common(bm, true);
  bm->add_option("--in", in, "template image (PGM); default: built-in template")->check(CLI::ExistingFile);

  std::string id;
  auto* run = app.add_subcommand("run", "process a raw passage into a session bundle");
  add_common(run, true);
  run->add_option("--in", in, "raw passage directory")->required()->check(CLI::ExistingDirectory);
  run->add_option("--id", id, "session id (default: passage id)");
  run->add_option("--model", model, "pantograph feature model set (PGFM1 records)")->check(CLI::ExistingFile);

  auto* tile = app.add_subcommand("tile", "build a 256-px tile pyramid from a PGM, streaming");
  add_common(tile, true);
  tile->add_option("--in", in, "source image (PGM)")->required()->check(CLI::ExistingFile);

  std::string sessions, raw_root;
  std::vector<std::string> truth;
  double iou_threshold = 0.8;
  auto* ev = app.add_subcommand("evaluate", "score sessions against ground truth");
  add_common(ev, false);
  ev->add_option("--sessions", sessions, "session root")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--truth", truth, "raw passage directories holding truth.json");
  ev->add_option("--raw-root", raw_root, "directory of raw passages")->check(CLI::ExistingDirectory);
  ev->add_option("--iou", iou_threshold, "pantograph IoU threshold");

  std::string bind;
  bool local_fleet = false;
  auto* serve = app.add_subcommand("serve", "acquisition manager + session service (GATE_BIND_ADDR)");
  add_common(serve, false);
  serve->add_option("--sessions", sessions, "session root")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--bind", bind, "host:port, overrides GATE_BIND_ADDR");
  serve->add_flag("--local-fleet", local_fleet, "attach the simulated five-sensor reference fleet");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*synth) return cmd_synth(common, count);
    if (*seg) return cmd_segment(common, in);
    if (*therm) return cmd_thermal(common, left, right, preview, range);
    if (*det) return cmd_detect(common, in, model);
    if (*bm) return cmd_build_model(common, in);
    if (*run) return cmd_run(common, in, id, model);
    if (*tile) return cmd_tile(common, in);
    if (*ev) return cmd_evaluate(common, sessions, truth, raw_root, iou_threshold);
    if (*serve) return cmd_serve(sessions, bind, local_fleet);
  } catch (const cli::StageFailure& e) {
    std::cerr << "gate: " << e.what() << '\n';
    return kExitStage;
  } catch (const Error& e) {
    std::cerr << "gate: " << e.what() << '\n';
    return is_validation(e.code()) ? kExitValidation : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "gate: " << e.what() << '\n';
    return kExitStage;
  }
  return 0;
}
