#include "friendsim/report.hpp"
#include "friendsim/scenarios.hpp"
#include "friendsim/trace_format.hpp"

#include <doctest.h>

using namespace friendsim;

namespace {

ProtocolSpec ewf() { return parse_protocol(find_scenario("ewf")->text); }

std::vector<Perspective> pick(const ProtocolSpec &spec, std::initializer_list<const char *> names) {
    std::vector<Perspective> out;
    for (const auto *n : names) {
        out.push_back(spec.perspective(n));
    }
    return out;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("certain claims") {
    const auto spec = ewf();
    const auto collapse = run(spec, spec.perspective("fbar-collapse"));
    const std::vector<Event> events = {Event::label("W_L", "f"), Event::label("W_L", "ok")};
    const auto claims = certain_claims(collapse, events);
    REQUIRE(claims.size() == 2);
    CHECK(claims[0].probability == RadicalScalar(1));
    CHECK(claims[0].certain);
    CHECK(claims[1].certain);

    const auto ensemble = run(spec, spec.perspective("ensemble"));
    const auto soft = certain_claims(ensemble, events);
    CHECK(soft[1].probability == RadicalScalar(Rational(1, 6)));
    CHECK_FALSE(soft[1].certain);

    // A register nobody has touched is certainly at its ready label.
    const auto idle = parse_protocol("register coin { h t }\nregister memo { r h t } ready r\ninit coin = |h>\n");
    const auto idle_trace = run(idle, idle.perspective("ensemble"));
    const auto ready = certain_claims(idle_trace, std::vector<Event>{Event::label("memo", "r")});
    CHECK(ready[0].probability == RadicalScalar(1));
    CHECK(ready[0].certain);
}

TEST_CASE("contradiction between the ensemble and Fbar's collapse") {
    const auto spec = ewf();
    const auto perspectives = pick(spec, {"ensemble", "fbar-collapse"});
    const auto report = contradiction_report(spec, perspectives, spec.check_events, Event::label("Wbar", "ok"));
    REQUIRE(report.contradictions.size() == 1);
    const auto &c = report.contradictions[0];
    CHECK(c.event == Event::label("W_L", "ok"));
    CHECK(c.first == "ensemble");
    CHECK(c.first_probability == RadicalScalar(Rational(1, 12)));
    CHECK(c.second == "fbar-collapse");
    CHECK(c.second_probability.is_zero());
    CHECK_FALSE(report.consistent());
    CHECK(report.evaluations[1].condition_probability == RadicalScalar(Rational(1, 2)));

    const auto text = render_report(report, false);
    CHECK(text.find("CONTRADICTION on W_L=ok: ensemble gives 1/12, fbar-collapse gives 0") != std::string::npos);
}

TEST_CASE("no contradiction on the fail event") {
    const auto spec = ewf();
    const auto perspectives = pick(spec, {"ensemble", "fbar-collapse"});
    const std::vector<Event> fail = {Event::label("W_L", "f")};
    CHECK(contradiction_report(spec, perspectives, fail, Event::label("Wbar", "ok")).consistent());
    CHECK(contradiction_report(spec, perspectives, fail, std::nullopt).consistent());
}

TEST_CASE("identical perspectives agree") {
    const auto spec = ewf();
    const auto perspectives = pick(spec, {"ensemble", "ensemble"});
    const auto report = contradiction_report(spec, perspectives, spec.check_events, spec.check_given);
    CHECK(report.consistent());
    CHECK(render_report(report, false).find("NO CONTRADICTION") != std::string::npos);
    CHECK_THROWS_AS(contradiction_report(spec, pick(spec, {"ensemble"}), spec.check_events, std::nullopt),
                    std::invalid_argument);
}

TEST_CASE("an impossible condition makes a perspective inapplicable") {
    const auto spec = ewf();
    const auto perspectives = pick(spec, {"ensemble", "wbar-collapse"});
    const auto report = contradiction_report(spec, perspectives, spec.check_events, Event::label("Wbar", "f"));
    CHECK_FALSE(report.evaluations[1].applicable);
    CHECK(report.consistent());
    CHECK(render_report(report, false).find("(inapplicable)") != std::string::npos);
}

TEST_CASE("report order follows the perspective order") {
    const auto spec = ewf();
    const auto report = contradiction_report(spec, spec.all_perspectives(), spec.check_events, spec.check_given);
    REQUIRE(report.evaluations.size() == 3);
    CHECK(report.evaluations[0].perspective == "ensemble");
    CHECK(report.evaluations[2].perspective == "wbar-collapse");
}

TEST_CASE("trace diff") {
    const auto spec = ewf();
    const auto ensemble = run(spec, spec.perspective("ensemble"));
    const auto collapse = run(spec, spec.perspective("fbar-collapse"));
    const auto diff = diff_traces(ensemble, collapse);
    CHECK(diff.first_divergence() == "00a");
    CHECK(diff.steps.at(0).identical);

    // After 30a the ensemble still has W_L=ok terms; the collapse trace has none.
    const auto &step30 = diff.steps.at(6);
    CHECK(step30.step_id == "30a");
    const auto w_l = spec.system->index_of("W_L");
    const auto ok = spec.system->label_of(w_l, "ok");
    bool ensemble_only_ok = false;
    for (const auto &change : step30.changes) {
        if (change.assignment[w_l] == ok) {
            CHECK_FALSE(change.second.has_value());
            ensemble_only_ok = true;
        }
    }
    CHECK(ensemble_only_ok);

    const auto same = diff_traces(ensemble, ensemble);
    CHECK_FALSE(same.first_divergence().has_value());
    CHECK(render_diff(same).find("identical: all 8 states agree") != std::string::npos);
    CHECK(render_diff(diff).find("first divergence at step 00a") != std::string::npos);
}

TEST_CASE("text and JSON traces carry the same exact values") {
    const auto spec = ewf();
    const auto trace = run(spec, spec.perspective("ensemble"));
    const auto json = trace_to_json(trace);
    const auto text = render_trace_text(trace, false);
    CHECK(json["perspective"] == "ensemble");
    REQUIRE(json["steps"].size() == trace.entries.size());
    for (const auto &step : json["steps"]) {
        for (const auto &term : step["state"]) {
            CHECK(text.find(term["coeff"]["exact"].get<std::string>() + " · ") != std::string::npos);
        }
    }
    for (const auto &q : json["queries"]) {
        CHECK(text.find(q["event"].get<std::string>() + ") = " + q["exact"].get<std::string>()) != std::string::npos);
    }
    CHECK(json["queries"][0]["exact"] == "1/12");
    CHECK(json["queries"][0]["float"].get<double>() == doctest::Approx(1.0 / 12));
    const auto round_trip = nlohmann::ordered_json::parse(json.dump(2));
    CHECK(round_trip.dump(2) == json.dump(2));
}

TEST_CASE("text trace shape") {
    const auto spec = parse_protocol(find_scenario("wigner")->text);
    const auto trace = run(spec, spec.perspective("friend-up"));
    const auto text = render_trace_text(trace, true);
    CHECK(text.rfind("perspective friend-up\n", 0) == 0);
    CHECK(text.find("step 10  [p = 1/2 (0.5)]") != std::string::npos);
    CHECK(text.find("[10] P(F=u) = 1 (1)") != std::string::npos);
}

}
