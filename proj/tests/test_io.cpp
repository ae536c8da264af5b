#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/io.hpp"
#include "test_util.hpp"

using namespace padic;
using io::json;

TEST_CASE("sbfunction json round trip is bit-exact on rationals") {
    PrimeCtx p3(3);
    SBFunction f(p3, 2, 1, 1);
    f.add({Rat(1, 3), Rat(2)}, Complex(0.125, -1.5));
    f.add({Rat(1), Rat(0)}, Complex(2.0, 0.0));

    const json j = io::sbfunction_to_json(f);
    CHECK(j.at("p") == 3);
    CHECK(j.at("n") == 2);
    const SBFunction g = io::sbfunction_from_json(j);
    CHECK(g.support_exp() == f.support_exp());
    CHECK(g.const_exp() == f.const_exp());
    REQUIRE(g.size() == f.size());
    for (const auto& [rep, c] : f.coeffs()) {
        CHECK(g.coeffs().count(rep) == 1);
        CHECK(g.coeff(rep) == c);
    }

    // serialization is deterministic
    CHECK(io::sbfunction_to_json(g).dump() == j.dump());
}

TEST_CASE("problem files parse every section") {
    const json j = json::parse(R"({
        "p": 3, "n": 2, "weights": [1, 1],
        "polynomial": [{"k": [2,0], "c": "1"}, {"k": [0,2], "c": "1"}],
        "lower_terms": [{"k": [1,0], "tail": "0",
                         "patches": [{"center": ["0","0"], "level": 0, "value": "1"}]}],
        "alpha": 0.5,
        "beta_list": [0, 1, 2],
        "function": {"p": 3, "n": 2, "L": 1, "m": 1,
                     "coeffs": [{"rep": ["1/3", "0"], "re": 1.0, "im": 0.0}]},
        "t_grid": [0.1, 1.0],
        "x": ["0", "0"],
        "tol": 1e-9,
        "depth_cap": 30,
        "cell_budget": 100000
    })");
    const io::ProblemSpec spec = io::parse_problem(j);
    CHECK(spec.p == 3);
    CHECK(spec.n == 2);
    REQUIRE(spec.poly.has_value());
    CHECK(spec.poly->terms().size() == 2);
    REQUIRE(spec.lower.size() == 1);
    CHECK(spec.lower[0].second.patches().size() == 1);
    CHECK(spec.alpha == 0.5);
    CHECK(spec.betas == std::vector<double>{0, 1, 2});
    REQUIRE(spec.fun.has_value());
    CHECK(spec.fun->size() == 1);
    CHECK(spec.t_grid == std::vector<double>{0.1, 1.0});
    CHECK(spec.tol == 1e-9);
    CHECK(spec.copts.depth_cap == 30);
    CHECK(spec.ropts.cell_budget == 100000);
}

TEST_CASE("rationals serialize as num/den strings") {
    CHECK(io::rat_json(Rat(-1, 2)) == json("-1/2"));
    CHECK(io::rat_from_json(json("7/3")) == Rat(7, 3));
    CHECK(io::rat_from_json(json(5)) == Rat(5));
    CHECK_THROWS_AS(io::rat_from_json(json(1.5)), std::invalid_argument);
}

TEST_CASE("doubles round to 15 significant digits") {
    const double x = 0.1 + 0.2;
    CHECK(io::json_real(x).dump() == io::json_real(0.3 + 5e-18).dump());
}

TEST_CASE("witness and certificate serialization") {
    WeightedPoly f(2, {1, 1}, PrimeCtx(5));
    f.add_term({2, 0}, Rat(1));
    f.add_term({0, 2}, Rat(1));
    const CertifyResult res = certify_quasielliptic(f);
    REQUIRE(std::holds_alternative<NonQEWitness>(res));
    const json w = io::witness_json(std::get<NonQEWitness>(res));
    CHECK(w.at("kind") == "root_class");
    CHECK(w.at("class").at("level") == 1);

    WeightedPoly g(2, {1, 1}, PrimeCtx(3));
    g.add_term({2, 0}, Rat(1));
    g.add_term({0, 2}, Rat(1));
    const CertifyResult res2 = certify_quasielliptic(g);
    REQUIRE(std::holds_alternative<QECertificate>(res2));
    const json c = io::certificate_json(std::get<QECertificate>(res2));
    CHECK(c.at("degree") == 2);
    CHECK(c.at("pure_powers").size() == 2);

    const ConstantsReport rep = estimate_constants(g, std::get<QECertificate>(res2));
    const json cj = io::constants_json(rep);
    CHECK(cj.at("A0") == "1/2");
    CHECK(cj.at("A1") == "1");
}
