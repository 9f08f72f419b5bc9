#include "friendsim/cli.hpp"

#include "friendsim/protocol.hpp"
#include "friendsim/report.hpp"
#include "friendsim/scenarios.hpp"
#include "friendsim/trace_format.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace friendsim::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input;     // protocol file path
    std::string scenario;  // or a built-in scenario name
    std::string perspective = std::string(kEnsemblePerspective);
    std::vector<std::string> perspectives;
    std::string format = "text";
    bool float_echo = false;
    std::string output;
    std::vector<std::string> events;
    std::string postselect;
};

struct Loaded {
    std::string source;  // for diagnostics
    ProtocolSpec spec;
};

Loaded load(const RunConfig &config) {
    if (config.input.empty() == config.scenario.empty()) {
        throw UsageError("give exactly one of a protocol file or --scenario");
    }
    std::string source;
    std::string text;
    if (!config.scenario.empty()) {
        const auto *scenario = find_scenario(config.scenario);
        if (!scenario) {
            throw UsageError("unknown scenario '" + config.scenario + "' (see `friendsim scenarios`)");
        }
        source = "<" + config.scenario + ">";
        text = scenario->text;
    } else {
        std::ifstream file(config.input, std::ios::binary);
        if (!file) {
            throw InputError(config.input + ": cannot read file");
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        source = config.input;
        text = buffer.str();
    }
    try {
        return {source, parse_protocol(text)};
    } catch (const ParseError &e) {
        throw InputError(source + ":" + e.what());
    }
}

Event parse_event(const ProtocolSpec &spec, const std::string &text) {
    // Reuse the protocol grammar: wrap the event in a one-line check statement.
    const auto rendered = render_protocol(ProtocolSpec{spec.system, spec.initial, spec.bases, {}, {}, {}, {}, {}});
    try {
        return parse_protocol(rendered + "check event " + text + "\n").check_events.at(0);
    } catch (const ParseError &e) {
        throw UsageError("bad event '" + text + "': " + e.detail());
    }
}

Perspective lookup_perspective(const ProtocolSpec &spec, const std::string &name) {
    try {
        return spec.perspective(name);
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
}

class Output {
public:
    Output(const std::string &path, std::ostream &fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw UsageError(path + ": cannot open for writing");
            }
            out_ = &file_;
        }
    }
    std::ostream &stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream *out_;
};

int cmd_run(const RunConfig &config, std::ostream &out) {
    const auto loaded = load(config);
    const auto &spec = loaded.spec;
    std::vector<Perspective> perspectives;
    if (config.perspective == "all") {
        perspectives = spec.all_perspectives();
    } else {
        perspectives.push_back(lookup_perspective(spec, config.perspective));
    }

    std::vector<std::future<Trace>> pending;
    for (const auto &p : perspectives) {
        pending.push_back(std::async(std::launch::async, [&spec, p] { return run(spec, p); }));
    }
    std::vector<Trace> traces;
    for (auto &f : pending) {
        traces.push_back(f.get());
    }

    Output sink(config.output, out);
    if (config.format == "json") {
        nlohmann::ordered_json doc;
        if (traces.size() == 1 && config.perspective != "all") {
            doc = trace_to_json(traces.front());
        } else {
            doc = nlohmann::ordered_json::array();
            for (const auto &t : traces) {
                doc.push_back(trace_to_json(t));
            }
        }
        sink.stream() << doc.dump(2) << "\n";
        return kOk;
    }
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (i != 0) {
            sink.stream() << "\n";
        }
        const auto claims = certain_claims(traces[i], spec.check_events);
        sink.stream() << render_trace_text(traces[i], config.float_echo, claims);
    }
    return kOk;
}

nlohmann::ordered_json report_json(const ConsistencyReport &report) {
    nlohmann::ordered_json doc;
    doc["condition"] = report.condition ? nlohmann::ordered_json(report.condition->str()) : nlohmann::ordered_json();
    auto evals = nlohmann::ordered_json::array();
    for (const auto &eval : report.evaluations) {
        nlohmann::ordered_json e;
        e["perspective"] = eval.perspective;
        e["applicable"] = eval.applicable;
        e["condition_probability"] = {{"exact", eval.condition_probability.str()},
                                      {"float", eval.condition_probability.to_double()}};
        auto events = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < report.events.size(); ++i) {
            events.push_back({{"event", report.events[i].str()},
                              {"exact", eval.joint[i].str()},
                              {"float", eval.joint[i].to_double()}});
        }
        e["events"] = std::move(events);
        evals.push_back(std::move(e));
    }
    doc["perspectives"] = std::move(evals);
    auto found = nlohmann::ordered_json::array();
    for (const auto &c : report.contradictions) {
        found.push_back({{"event", c.event.str()},
                         {"first", c.first},
                         {"first_exact", c.first_probability.str()},
                         {"second", c.second},
                         {"second_exact", c.second_probability.str()}});
    }
    doc["contradictions"] = std::move(found);
    return doc;
}

int cmd_check(const RunConfig &config, std::ostream &out) {
    const auto loaded = load(config);
    const auto &spec = loaded.spec;
    std::vector<Perspective> perspectives;
    if (config.perspectives.empty()) {
        perspectives = spec.all_perspectives();
    } else {
        for (const auto &name : config.perspectives) {
            perspectives.push_back(lookup_perspective(spec, name));
        }
    }
    if (perspectives.size() < 2) {
        throw UsageError("check needs at least two perspectives");
    }
    std::vector<Event> events;
    for (const auto &text : config.events) {
        events.push_back(parse_event(spec, text));
    }
    if (events.empty()) {
        events = spec.check_events;
    }
    if (events.empty()) {
        throw UsageError("no events to check: declare `check event` lines or pass --event");
    }
    std::optional<Event> condition = spec.check_given;
    if (!config.postselect.empty()) {
        condition = config.postselect == "none" ? std::nullopt : std::optional(parse_event(spec, config.postselect));
    }

    const auto report = contradiction_report(spec, perspectives, events, condition);
    Output sink(config.output, out);
    if (config.format == "json") {
        sink.stream() << report_json(report).dump(2) << "\n";
    } else {
        sink.stream() << render_report(report, config.float_echo);
    }
    return report.consistent() ? kOk : kContradiction;
}

int cmd_trace_diff(const RunConfig &config, std::ostream &out) {
    if (config.perspectives.size() != 2) {
        throw UsageError("trace-diff needs exactly two perspectives, e.g. --perspectives ensemble,fbar-collapse");
    }
    const auto loaded = load(config);
    const auto a = run(loaded.spec, lookup_perspective(loaded.spec, config.perspectives[0]));
    const auto b = run(loaded.spec, lookup_perspective(loaded.spec, config.perspectives[1]));
    Output sink(config.output, out);
    sink.stream() << render_diff(diff_traces(a, b));
    return kOk;
}

int cmd_scenarios(std::ostream &out) {
    for (const auto &s : builtin_scenarios()) {
        out << s.name << "\t" << s.summary << "\n";
    }
    return kOk;
}

void add_input_options(CLI::App *cmd, RunConfig &config) {
    cmd->add_option("input", config.input, "protocol file");
    cmd->add_option("--scenario", config.scenario, "built-in scenario (ewf, wigner)");
    cmd->add_flag("--float", config.float_echo, "echo decimal values next to exact ones");
    cmd->add_option("-o,--output", config.output, "write to this file instead of stdout");
}

}  // namespace

int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact simulator for Wigner's-friend style measurement protocols", "friendsim"};
    app.require_subcommand(1);
    RunConfig config;

    auto *run_cmd = app.add_subcommand("run", "run a protocol and print its exact trace");
    add_input_options(run_cmd, config);
    run_cmd->add_option("--perspective", config.perspective, "perspective name, or 'all'");
    run_cmd->add_option("--format", config.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto *check_cmd = app.add_subcommand("check", "look for contradictions between perspectives");
    add_input_options(check_cmd, config);
    check_cmd->add_option("--perspectives", config.perspectives, "comma-separated perspectives (default: all)")
        ->delimiter(',');
    check_cmd->add_option("--event", config.events, "event to compare (repeatable)");
    check_cmd->add_option("--postselect", config.postselect, "common condition, or 'none'");
    check_cmd->add_option("--format", config.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto *diff_cmd = app.add_subcommand("trace-diff", "compare two perspectives step by step");
    add_input_options(diff_cmd, config);
    diff_cmd->add_option("--perspectives", config.perspectives, "the two perspectives, comma-separated")
        ->delimiter(',')
        ->required();

    auto *list_cmd = app.add_subcommand("scenarios", "list built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "friendsim: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config, out);
        }
        if (check_cmd->parsed()) {
            return cmd_check(config, out);
        }
        if (diff_cmd->parsed()) {
            return cmd_trace_diff(config, out);
        }
        if (list_cmd->parsed()) {
            return cmd_scenarios(out);
        }
    } catch (const UsageError &e) {
        err << "friendsim: " << e.what() << "\n";
        return kUsage;
    } catch (const InputError &e) {
        err << "friendsim: " << e.what() << "\n";
        return kParseFailure;
    } catch (const StepError &e) {
        err << "friendsim: " << e.what() << "\n";
        return kStepFailure;
    } catch (const Error &e) {
        err << "friendsim: " << e.what() << "\n";
        return kStepFailure;
    }
    return kUsage;
}

}  // namespace friendsim::cli
