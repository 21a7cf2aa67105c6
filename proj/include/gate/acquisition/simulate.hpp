#pragma once

#include <memory>

#include "gate/acquisition/server.hpp"
#include "gate/synth/frontal.hpp"
#include "gate/synth/thermal_lines.hpp"
#include "gate/synth/train_side.hpp"

namespace gate::acquisition {

struct SensorRun {
  SensorDescriptor descriptor;
  std::int64_t duration_us = 0;  ///< time spent ACQUIRING
  std::uint64_t samples = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t wire_bytes = 0;
  std::vector<Transition> trace;
};

/// Renders the payload of sample i for the given sensor from the scenario:
/// line-visual columns cycle through the side mosaic stretched to 4096 rows, thermal
/// lines are quantized to one byte over [30, 800] °C, matrix frames are frontal views.
class SampleRenderer {
 public:
  SampleRenderer(const SensorDescriptor& d, const synth::ScenarioSpec& spec) : desc_(d), spec_(spec) {
    if (d.kind == SensorKind::line_visual) side_ = synth::render_side_mosaic(spec).image;
    if (d.kind == SensorKind::line_thermal) thermal_ = synth::render_thermal_lines(spec, d.id.find("right") == std::string::npos);
  }

  std::vector<std::uint8_t> render(std::uint64_t i) const {
    std::vector<std::uint8_t> out(desc_.payload_bytes_per_sample());
    switch (desc_.kind) {
      case SensorKind::line_visual: {
        const int x = static_cast<int>(i % static_cast<std::uint64_t>(side_.width()));
        for (int y = 0; y < desc_.height * desc_.width && y < static_cast<int>(out.size()); ++y)
          out[static_cast<std::size_t>(y)] = side_(x, y * side_.height() / desc_.width);
        break;
      }
      case SensorKind::line_thermal: {
        const auto& line = thermal_[i % thermal_.size()];
        for (std::size_t k = 0; k < out.size() && k < line.samples.size(); ++k)
          out[k] = static_cast<std::uint8_t>(std::lround((thermal::clamp_temp(line.samples[k]) - 30.0f) / 770.0f * 255.0f));
        break;
      }
      case SensorKind::matrix_visual: {
        const auto f = synth::render_frontal_frame(spec_, static_cast<int>(i % 1000), 1000);
        for (int y = 0; y < std::min(desc_.height, f.height()); ++y)
          for (int x = 0; x < std::min(desc_.width, f.width()); ++x)
            out[static_cast<std::size_t>(y) * desc_.width + x] = f(x, y);
        break;
      }
    }
    return out;
  }

 private:
  SensorDescriptor desc_;
  synth::ScenarioSpec spec_;
  GrayImage side_;
  std::vector<thermal::ThermalLine> thermal_;
};

/// Drives one sensor through start -> acquire for `duration_us` -> stop -> drain under a
/// private virtual clock. `sink` (optional) sees every emitted sample.
inline SensorRun simulate_sensor(const SensorDescriptor& d, std::int64_t duration_us, SampleSink sink = {}) {
  if (duration_us < 0) throw Error(Errc::invalid_argument, "duration must be non-negative");
  VirtualClock clock;
  AcquisitionServer server(d, clock);
  if (sink) server.set_sink(std::move(sink));
  server.handle("start", {{"session", "sim"}});
  // Advance in 100 ms steps so sinks see samples in bounded batches.
  for (std::int64_t t = 0; t < duration_us;) {
    const std::int64_t step = std::min<std::int64_t>(100'000, duration_us - t);
    clock.advance_us(step);
    t += step;
    server.tick();
  }
  server.handle("stop");
  while (server.state() == Lifecycle::saving) clock.advance_us(10'000);
  const auto st = server.status();
  return {d, duration_us, st.samples, st.payload_bytes, st.wire_bytes, server.trace()};
}

struct SensorThroughput {
  std::string id;
  SensorKind kind;
  double measured_Bps = 0;
  double declared_Bps = 0;
  double nominal_Bps = 0;
  double rel_error = 0;  ///< |measured - nominal| / nominal
};

struct ThroughputReport {
  std::vector<SensorThroughput> sensors;
  double aggregate_Bps = 0;
  double budget_Bps = kDiskBudgetBps;
  bool within_budget() const { return aggregate_Bps <= budget_Bps; }
};

inline ThroughputReport throughput_report(const std::vector<SensorRun>& runs, double budget_Bps = kDiskBudgetBps) {
  ThroughputReport r;
  r.budget_Bps = budget_Bps;
  for (const auto& run : runs) {
    SensorThroughput t;
    t.id = run.descriptor.id;
    t.kind = run.descriptor.kind;
    t.measured_Bps = run.duration_us > 0 ? static_cast<double>(run.wire_bytes) * 1e6 / static_cast<double>(run.duration_us) : 0;
    t.declared_Bps = run.descriptor.declared_rate_Bps();
    t.nominal_Bps = nominal_rate_Bps(run.descriptor.kind);
    t.rel_error = run.duration_us > 0 ? std::fabs(t.measured_Bps - t.nominal_Bps) / t.nominal_Bps : 0;
    r.aggregate_Bps += t.measured_Bps;
    r.sensors.push_back(t);
  }
  return r;
}

inline Json to_json(const ThroughputReport& r) {
  Json s = Json::array();
  for (const auto& t : r.sensors)
    s.push_back({{"id", t.id},
                 {"kind", to_string(t.kind)},
                 {"measured_Bps", t.measured_Bps},
                 {"declared_Bps", t.declared_Bps},
                 {"nominal_Bps", t.nominal_Bps},
                 {"rel_error", t.rel_error}});
  return {{"sensors", s}, {"aggregate_Bps", r.aggregate_Bps}, {"budget_Bps", r.budget_Bps}, {"within_budget", r.within_budget()}};
}

}  // namespace gate::acquisition
