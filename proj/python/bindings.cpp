#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "surveyor/oracle.hpp"
#include "surveyor/sim.hpp"

namespace py = pybind11;
using namespace surveyor;

PYBIND11_MODULE(_surveyor, m) {
    m.doc() = "Multi-agent surface survey simulator";

    py::class_<AgentMetrics>(m, "AgentMetrics")
        .def_readonly("name", &AgentMetrics::name)
        .def_readonly("flight_time", &AgentMetrics::flight_time)
        .def_readonly("path_length", &AgentMetrics::path_length);

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("explorer", &Metrics::explorer)
        .def_readonly("photographers", &Metrics::photographers)
        .def_readonly("completion_time", &Metrics::completion_time)
        .def_readonly("exploration_time", &Metrics::exploration_time)
        .def_readonly("viewpoint_count", &Metrics::viewpoint_count)
        .def_readonly("visited_viewpoints", &Metrics::visited_viewpoints)
        .def_readonly("abandoned_viewpoints", &Metrics::abandoned_viewpoints)
        .def_readonly("pruned_viewpoints", &Metrics::pruned_viewpoints)
        .def_readonly("point_count", &Metrics::point_count)
        .def_readonly("coverage_rate", &Metrics::coverage_rate)
        .def_readonly("captured_rate", &Metrics::captured_rate)
        .def_readonly("complete", &Metrics::complete)
        .def_readonly("ticks", &Metrics::ticks)
        .def("to_json", [](const Metrics& x) { return x.to_json().dump(); });

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("tick_budget", &Scenario::tick_budget)
        .def_readwrite("n_photographers", &Scenario::n_photographers)
        .def_readonly("resolution", &Scenario::resolution)
        .def_readonly("dt", &Scenario::dt)
        .def("to_json",
             [](const Scenario& s) { return scenario_to_json(s).dump(); });

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def(
        "scenario_from_json",
        [](const std::string& text, const std::string& base_dir) {
            return scenario_from_json(nlohmann::json::parse(text), base_dir);
        },
        py::arg("text"), py::arg("base_dir") = ".");
    m.def("validate_scenario", &validate_scenario, py::arg("scenario"));

    py::class_<Engine>(m, "Engine")
        .def(py::init<Scenario>(), py::arg("scenario"))
        .def("step", &Engine::step)
        .def("finished", &Engine::finished)
        .def("run", &Engine::run, py::return_value_policy::reference_internal)
        .def("export_results", &Engine::export_results, py::arg("out_dir"))
        .def("metrics", &Engine::metrics,
             py::return_value_policy::reference_internal)
        .def_property_readonly("tick", &Engine::tick)
        .def_property_readonly("time", &Engine::time);

    m.def(
        "exhaustive_mtsp",
        [](const std::string& text) {
            const auto j = nlohmann::json::parse(text);
            oracle::MtspInstance inst;
            inst.n_agents = j.at("n_agents");
            inst.n_tasks = j.at("n_tasks");
            inst.epsilon = j.value("epsilon", 1e-4);
            for (const auto& row : j.at("depot_cost"))
                for (const auto& v : row)
                    inst.depot_cost.push_back(v.get<double>());
            for (const auto& row : j.at("task_cost"))
                for (const auto& v : row)
                    inst.task_cost.push_back(v.get<double>());
            const auto sol = oracle::exhaustive_mtsp(inst);
            nlohmann::json out{{"objective", sol.objective},
                               {"paths", sol.paths}};
            return out.dump();
        },
        py::arg("instance_json"));
}
