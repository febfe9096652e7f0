#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "iotmac/adaptation.hpp"
#include "iotmac/csma.hpp"
#include "iotmac/deadline.hpp"
#include "iotmac/experiment.hpp"
#include "iotmac/flows.hpp"
#include "iotmac/metrics.hpp"
#include "iotmac/reservation.hpp"
#include "iotmac/rng.hpp"

namespace py = pybind11;
using namespace iotmac;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reservation-based, deadline-aware IoT MAC simulator";

  py::class_<FlowSpec>(m, "FlowSpec")
      .def(py::init<std::uint64_t, double, int, double>(), py::arg("id"),
           py::arg("arrival"), py::arg("load"), py::arg("deadline"))
      .def_readwrite("id", &FlowSpec::id)
      .def_readwrite("arrival", &FlowSpec::arrival)
      .def_readwrite("load", &FlowSpec::load)
      .def_readwrite("deadline", &FlowSpec::deadline)
      .def("__repr__", [](const FlowSpec& f) {
        std::ostringstream s;
        s << "FlowSpec(id=" << f.id << ", arrival=" << f.arrival
          << ", load=" << f.load << ", deadline=" << f.deadline << ")";
        return s.str();
      });

  py::class_<FrameConfig>(m, "FrameConfig")
      .def(py::init<int, int, int, int>(), py::arg("channels"),
           py::arg("contention_slots"), py::arg("tx_slots"), py::arg("slot_len"))
      .def_readwrite("channels", &FrameConfig::channels)
      .def_readwrite("contention_slots", &FrameConfig::contention_slots)
      .def_readwrite("tx_slots", &FrameConfig::tx_slots)
      .def_readwrite("slot_len", &FrameConfig::slot_len)
      .def("frame_len", &FrameConfig::frame_len)
      .def("contention_blocks", &FrameConfig::contention_blocks)
      .def("validate", &FrameConfig::validate);

  py::class_<LoadModel>(m, "LoadModel")
      .def_static("deterministic", &LoadModel::deterministic, py::arg("packets"),
                  py::arg("slack_min") = 2, py::arg("slack_max") = 20)
      .def_static("geometric", &LoadModel::geometric, py::arg("mean"),
                  py::arg("slack_min") = 2, py::arg("slack_max") = 20)
      .def_readonly("slack_min", &LoadModel::slack_min)
      .def_readonly("slack_max", &LoadModel::slack_max)
      .def("mean_load", &LoadModel::mean_load);

  py::class_<ActiveFlow>(m, "ActiveFlow")
      .def(py::init<std::uint64_t, int, int>(), py::arg("id"), py::arg("load"),
           py::arg("deadline_slots"))
      .def_readwrite("id", &ActiveFlow::id)
      .def_readwrite("load", &ActiveFlow::load)
      .def_readwrite("deadline_slots", &ActiveFlow::deadline_slots)
      .def("laxity", &ActiveFlow::laxity);

  py::class_<AdmissionRequest>(m, "AdmissionRequest")
      .def(py::init<std::uint64_t, int, int>(), py::arg("id"), py::arg("load"),
           py::arg("deadline_slots"))
      .def_readwrite("id", &AdmissionRequest::id)
      .def_readwrite("load", &AdmissionRequest::load)
      .def_readwrite("deadline_slots", &AdmissionRequest::deadline_slots);

  py::class_<SlotSchedule>(m, "SlotSchedule")
      .def_readonly("slots", &SlotSchedule::slots);

  py::class_<AdmissionResult>(m, "AdmissionResult")
      .def_readonly("accepted", &AdmissionResult::accepted)
      .def_readonly("active", &AdmissionResult::active);

  py::class_<ScheduleResult>(m, "ScheduleResult")
      .def_readonly("schedule", &ScheduleResult::schedule)
      .def_readonly("active", &ScheduleResult::active)
      .def_readonly("completed", &ScheduleResult::completed)
      .def_readonly("transmissions", &ScheduleResult::transmissions);

  py::class_<RunMetrics>(m, "RunMetrics")
      .def(py::init<>())
      .def_readwrite("successes", &RunMetrics::successes)
      .def_readwrite("failures", &RunMetrics::failures)
      .def_readwrite("tx_time", &RunMetrics::tx_time)
      .def_readwrite("horizon", &RunMetrics::horizon);

  py::class_<CsmaParams>(m, "CsmaParams")
      .def(py::init<>())
      .def_readwrite("cw_min", &CsmaParams::cw_min)
      .def_readwrite("cw_max", &CsmaParams::cw_max)
      .def_readwrite("max_collisions", &CsmaParams::max_collisions)
      .def_readwrite("packet_duration", &CsmaParams::packet_duration)
      .def_readwrite("freeze_backoff", &CsmaParams::freeze_backoff);

  m.def(
      "generate_arrivals",
      [](double rate, double horizon, const LoadModel& model, int slot_len,
         std::uint64_t seed) {
        Rng rng(seed);
        return generate_arrivals(rate, horizon, model, slot_len, rng);
      },
      py::arg("rate"), py::arg("horizon"), py::arg("model"), py::arg("slot_len"),
      py::arg("seed"));

  m.def(
      "deadline_to_slots",
      [](double absolute_deadline, double now, const FrameConfig& cfg)
          -> std::optional<int> {
        return deadline_to_slots(absolute_deadline, now, cfg);
      },
      py::arg("absolute_deadline"), py::arg("now"), py::arg("cfg"));

  m.def(
      "llf_step",
      [](const std::vector<ActiveFlow>& flows, int channels) {
        return llf_step(flows, channels);
      },
      py::arg("flows"), py::arg("channels"));
  m.def(
      "llf_feasible",
      [](std::vector<ActiveFlow> flows, int channels) {
        return llf_feasible(std::move(flows), channels);
      },
      py::arg("flows"), py::arg("channels"));
  m.def(
      "maxflow_feasible",
      [](const std::vector<ActiveFlow>& flows, int channels) {
        return maxflow_feasible(flows, channels);
      },
      py::arg("flows"), py::arg("channels"));
  m.def(
      "admission_control",
      [](std::vector<ActiveFlow> active,
         const std::vector<AdmissionRequest>& requests, int channels) {
        return admission_control(std::move(active), requests, channels);
      },
      py::arg("active"), py::arg("requests"), py::arg("channels"));
  m.def("build_schedule", &build_schedule, py::arg("active"),
        py::arg("tx_slots"), py::arg("channels"));

  m.def(
      "update_p",
      [](double p, double delta, const ContentionStats& stats,
         const FrameConfig& cfg) {
        return update_p(PController{p, delta}, stats, cfg).p;
      },
      py::arg("p"), py::arg("delta"), py::arg("stats"), py::arg("cfg"));
  m.def("optimal_p", &optimal_p, py::arg("rate"), py::arg("cfg"));
  m.def("play_reward", &play_reward, py::arg("accepted"), py::arg("cfg"),
        py::arg("frames_per_play"));
  m.def("ucb_value", &ucb_value, py::arg("mean_reward"), py::arg("plays"),
        py::arg("total_plays"));

  py::class_<ContentionStats>(m, "ContentionStats")
      .def(py::init<>())
      .def_readwrite("idle", &ContentionStats::idle)
      .def_readwrite("success", &ContentionStats::success)
      .def_readwrite("collision", &ContentionStats::collision)
      .def("blocks", &ContentionStats::blocks);

  py::class_<UcbState>(m, "UcbState")
      .def(py::init<std::vector<FrameConfig>, int, double>(),
           py::arg("arm_configs"), py::arg("frames_per_play"), py::arg("delta"))
      .def("select", &UcbState::select)
      .def("update", &UcbState::update, py::arg("arm"), py::arg("reward"))
      .def("size", &UcbState::size)
      .def("total_plays", &UcbState::total_plays)
      .def("plays", [](const UcbState& s, std::size_t i) { return s.arm(i).plays; })
      .def("mean_reward",
           [](const UcbState& s, std::size_t i) { return s.arm(i).mean_reward; })
      .def("arm_p", [](const UcbState& s, std::size_t i) { return s.arm(i).pctrl.p; });

  m.def(
      "run_csma",
      [](const std::vector<FlowSpec>& arrivals, const CsmaParams& params,
         double horizon, std::uint64_t seed) {
        Rng rng(seed);
        return run_csma(arrivals, params, horizon, rng);
      },
      py::arg("arrivals"), py::arg("params"), py::arg("horizon"), py::arg("seed"));

  m.def("throughput", &throughput, py::arg("metrics"));
  m.def("energy_per_success", &energy_per_success, py::arg("metrics"));

  py::enum_<Mode>(m, "Mode")
      .value("adaptive", Mode::adaptive)
      .value("oracle", Mode::oracle)
      .value("csma", Mode::csma);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("channels", &ExperimentConfig::channels)
      .def_readwrite("frame_length", &ExperimentConfig::frame_length)
      .def_readwrite("slot_length", &ExperimentConfig::slot_length)
      .def_readwrite("arms", &ExperimentConfig::arms)
      .def_readwrite("frames_per_play", &ExperimentConfig::frames_per_play)
      .def_readwrite("load", &ExperimentConfig::load)
      .def_readwrite("lambdas", &ExperimentConfig::lambdas)
      .def_readwrite("frames", &ExperimentConfig::frames)
      .def_readwrite("replications", &ExperimentConfig::replications)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("retry_until_expiry", &ExperimentConfig::retry_until_expiry)
      .def_readwrite("freeze_backoff", &ExperimentConfig::freeze_backoff)
      .def_readwrite("out", &ExperimentConfig::out)
      .def("capacity_bound", &ExperimentConfig::capacity_bound)
      .def("lambda_grid", &ExperimentConfig::lambda_grid)
      .def("validate", &ExperimentConfig::validate);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("mode", &RunResult::mode)
      .def_readonly("lambda_", &RunResult::lambda)
      .def_readonly("replication", &RunResult::replication)
      .def_readonly("metrics", &RunResult::metrics)
      .def_readonly("accepted", &RunResult::accepted)
      .def_readonly("completed", &RunResult::completed)
      .def_readonly("failed", &RunResult::failed)
      .def_readonly("final_p", &RunResult::final_p)
      .def_readonly("play_counts", &RunResult::play_counts);

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("results_csv", &results_csv, py::arg("rows"));
  m.def("summary_csv", &summary_csv, py::arg("rows"));
  m.def("config_json", &config_json, py::arg("config"));
  m.def("parse_config_file", &parse_config_file, py::arg("path"));

  py::register_exception<ConfigError>(m, "ConfigError");
}
