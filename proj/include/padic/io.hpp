#ifndef PADIC_IO_HPP
#define PADIC_IO_HPP

#include <json.hpp>

#include "padic/heat.hpp"

namespace padic::io {

using nlohmann::json;

// Doubles are rounded to 15 significant digits before serialization so that
// identical inputs produce byte-identical output.
json json_real(double v);

json rat_json(const Rat& x);
Rat rat_from_json(const json& j);

std::vector<Rat> rat_vector_from_json(const json& j);
json rat_vector_json(const std::vector<Rat>& v);

// Schema: {p, n, L, m, coeffs: [{rep: ["num/den",...], re, im}]}
json sbfunction_to_json(const SBFunction& f);
SBFunction sbfunction_from_json(const json& j);

json ball_json(const Ball& b);

json certificate_json(const QECertificate& cert);
json witness_json(const NonQEWitness& w);
json constants_json(const ConstantsReport& rep);

// Declarative problem file shared by every subcommand; fields irrelevant to a
// given command are ignored.
struct ProblemSpec {
    long p = 2;
    size_t n = 1;
    std::vector<long> weights;
    std::optional<WeightedPoly> poly;
    LowerTerms lower;
    double alpha = 1.0;
    std::vector<double> betas;
    std::optional<SBFunction> fun;
    std::vector<double> t_grid;
    std::optional<std::vector<Rat>> x;
    long l = 2;
    long r = 1;
    double h = 1e-3;
    double tol = 1e-10;
    std::optional<long> region_lo;
    std::optional<long> region_hi;
    CertifyOptions copts;
    RefineOptions ropts;
};

ProblemSpec parse_problem(const json& j);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace padic::io

#endif
