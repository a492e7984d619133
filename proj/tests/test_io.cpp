#include <doctest.h>

#include <sstream>

#include "osc/errors.hpp"
#include "osc/problem_io.hpp"
#include "osc/report.hpp"
#include "support.hpp"

using namespace osc;
using doctest::Approx;

TEST_CASE("format_real uses twelve significant digits") {
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(1e-20) == "1e-20");
    CHECK(format_real(NAN) == "nan");
    CHECK(format_real(-INFINITY) == "-inf");
    CHECK(json_real(NAN).is_null());
    CHECK(json_real(0.1 + 0.2).get<double>() == 0.3);
}

TEST_CASE("shipped fixtures parse") {
    const auto ex31 = load_problem(test::fixture("ex31.json"));
    REQUIRE(is_delay(ex31.equation));
    const auto& terms = terms_of(ex31.equation);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].argument(4.5) == Approx(test::ex31_tau()(4.5)));
    CHECK(terms[1].argument(4.5) == Approx(test::ex31_tau(-0.1)(4.5)));
    CHECK(terms[1].coefficient(7.0) == Approx(1.0 / (2.2 * test::kE)));
    CHECK(*ex31.period_hint == 2.0);
    CHECK(ex31.window->lo == 9.0);

    const auto ex32 = load_problem(test::fixture("ex32.json"));
    CHECK_FALSE(is_delay(ex32.equation));
    CHECK(terms_of(ex32.equation)[1].argument(5.25) == Approx(test::ex32_sigma(0.1)(5.25)));

    const auto alpha1 = load_problem(test::fixture("ex21_alpha1.json"));
    REQUIRE(alpha1.history);
    CHECK((*alpha1.history)(-0.5) == Approx(std::exp(0.5)));

    const auto ex22 = load_problem(test::fixture("ex22.json"));
    CHECK((*ex22.history)(-1.0) == 0.0);
    CHECK(load_problem(test::fixture("ex21_alpha05.json")).window);
}

TEST_CASE("parse errors name the field") {
    auto message = [](const char* text) {
        try {
            (void)parse_problem(Json::parse(text));
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message(R"({"terms": []})").find("$: missing field \"type\"") != std::string::npos);
    CHECK(message(R"({"type": "neutral", "terms": []})").find("$.type") != std::string::npos);
    CHECK(message(R"({"type": "delay", "terms": [{"p": {"t0": 0, "period": null,
        "cells": [{"l": 0, "u": null, "c0": "x"}]}, "arg": {}}]})")
              .find("$.terms[0].p.cells[0].c0") != std::string::npos);
    CHECK(message(R"({"type": "delay", "terms": [{"p": {"t0": 0, "period": 2,
        "cells": [{"l": 0, "u": 1}]}, "arg": {}}]})")
              .find("$.terms[0].p") != std::string::npos);
    CHECK(message(R"({"type": "delay", "terms": [{"p": {"t0": 0, "period": null,
        "cells": [{"l": 0, "u": null, "form": "sin"}]}, "arg": {}}]})")
              .find("unknown form") != std::string::npos);
}

TEST_CASE("unreadable files") {
    CHECK_THROWS_AS((void)load_problem("/nonexistent/problem.json"), InputError);
}

TEST_CASE("piecewise json round trip") {
    const auto f = test::ex31_tau();
    const auto g = parse_piecewise(piecewise_json(f));
    for (double t = 1.0; t < 9.0; t += 0.31) CHECK(g(t) == f(t));
    const auto h = parse_piecewise(piecewise_json(test::exp_history(0.5)));
    CHECK(h(2.0) == Approx(std::exp(-1.0)));
}

TEST_CASE("report json layout") {
    CriterionReport rep;
    rep.id = CriterionId::THM_2_4A;
    rep.r = 2;
    rep.estimate = 1.5;
    rep.threshold = 1.0;
    rep.margin = 0.5;
    rep.verdict = Verdict::Oscillatory;
    OverallVerdict overall{Verdict::Oscillatory, CriterionId::THM_2_4A, 2, {"note"}};
    const std::vector<CriterionReport> reps{rep};
    const auto j = report_json(Json::object(), reps, overall);
    CHECK(j.dump() ==
          R"({"problem":{},"criteria":[{"id":"THM_2_4A","r":2,"limit":"limsup","estimate":1.5,"threshold":1.0,)"
          R"("margin":0.5,"verdict":"OSCILLATORY"}],"overall":{"verdict":"OSCILLATORY","by":"THM_2_4A","r":2,)"
          R"("annotations":["note"]}})");
    CHECK(criterion_stem(rep) == "THM_2_4A_r2");
    rep.t = {1.0, 2.0};
    rep.values = {0.25, 0.5};
    std::ostringstream os;
    write_criterion_csv(os, rep);
    CHECK(os.str() == "t,f_2\n1,0.25\n2,0.5\n");
}
