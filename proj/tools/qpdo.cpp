// qpdo: batch front-end for the p-adic quasielliptic operator library.
// Declarative JSON problem files in, JSON (and optional CSV) tables out.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "padic/io.hpp"

using namespace padic;
using io::json;

namespace {

struct CliConfig {
    std::string input;
    std::string output = "-";
    std::string csv;
    unsigned threads = 1;
    long seed = 0;
    bool verbose = false;
    std::optional<double> tol;
    std::optional<long> depth_cap;
    std::optional<long> cell_budget;
};

template <class F>
void parallel_for(size_t count, unsigned threads, F&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads && t < count; ++t) {
        pool.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

io::ProblemSpec load_problem(const CliConfig& cfg) {
    std::ifstream in(cfg.input);
    if (!in) throw std::runtime_error("cannot open input file: " + cfg.input);
    json j = json::parse(in);
    io::ProblemSpec spec = io::parse_problem(j);
    if (cfg.tol) spec.tol = *cfg.tol;
    if (cfg.depth_cap) {
        spec.copts.depth_cap = *cfg.depth_cap;
        spec.ropts.depth_cap = *cfg.depth_cap;
    }
    if (cfg.cell_budget) {
        spec.copts.cell_budget = static_cast<size_t>(*cfg.cell_budget);
        spec.ropts.cell_budget = static_cast<size_t>(*cfg.cell_budget);
    }
    return spec;
}

const WeightedPoly& require_poly(const io::ProblemSpec& spec) {
    if (!spec.poly) throw std::invalid_argument("problem file must define \"polynomial\"");
    return *spec.poly;
}

const SBFunction& require_fun(const io::ProblemSpec& spec) {
    if (!spec.fun) throw std::invalid_argument("problem file must define \"function\"");
    return *spec.fun;
}

PadicVector require_x(const io::ProblemSpec& spec) {
    if (!spec.x) throw std::invalid_argument("problem file must define \"x\"");
    return PadicVector{*spec.x, PrimeCtx(spec.p)};
}

void emit(const CliConfig& cfg, const std::string& command, json body) {
    body["metadata"] =
        json{{"command", command}, {"seed", cfg.seed}, {"threads", cfg.threads}};
    const std::string text = body.dump(2) + "\n";
    if (cfg.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output);
        if (!out) throw std::runtime_error("cannot open output file: " + cfg.output);
        out << text;
    }
}

std::string vec_string(const std::vector<Rat>& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << rat_to_string(v[i]);
    os << ")";
    return os.str();
}

std::string real_string(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

// Pointwise solution claims for the evolution hold classically for unit
// weights; anisotropic weights get the finite coset computation only.
std::string classical_scope(const WeightedPoly& f) {
    for (long w : f.weights())
        if (w != 1) return "finite coset data (anisotropic weights)";
    return "classical (unit weights)";
}

int run_certify(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const CertifyResult res = certify_quasielliptic(require_poly(spec), spec.copts);
    if (const auto* cert = std::get_if<QECertificate>(&res)) {
        emit(cfg, "certify", json{{"status", "certificate"}, {"certificate", io::certificate_json(*cert)}});
        return 0;
    }
    const NonQEWitness& w = std::get<NonQEWitness>(res);
    const bool inconclusive = std::holds_alternative<InconclusiveWitness>(w);
    emit(cfg, "certify",
         json{{"status", inconclusive ? "inconclusive" : "witness"}, {"witness", io::witness_json(w)}});
    return 2;
}

int run_constants(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const CertifyResult res = certify_quasielliptic(require_poly(spec), spec.copts);
    if (const auto* w = std::get_if<NonQEWitness>(&res)) {
        emit(cfg, "constants", json{{"status", "witness"}, {"witness", io::witness_json(*w)}});
        return 2;
    }
    const QECertificate& cert = std::get<QECertificate>(res);
    const WeightedPoly& f = require_poly(spec);
    ConstantsReport rep = estimate_constants(f, cert, spec.ropts);
    if (!spec.lower.empty()) rep.M0 = sq_radius_M0(f, cert, spec.lower, spec.ropts);
    json out{{"status", "ok"},
             {"certificate", io::certificate_json(cert)},
             {"constants", io::constants_json(rep)}};
    if (cfg.verbose) {
        // audit dump: the scaling fundamental-domain table behind A0/A1
        const WeightedPoly fn = f.scaled(pow_p(f.ctx().p(), cert.norm_shift));
        long K = 1;
        for (long w : f.weights()) K = std::max(K, w);
        const Orthant full{std::vector<int>(f.n(), 1)};
        const SymbolTable table =
            build_symbol_table(fn, fundamental_domain(full, f.weights(), f.ctx(), K), spec.ropts);
        json cells = json::array();
        for (const SymbolCell& cell : table.cells)
            cells.push_back(json{{"ball", io::ball_json(cell.ball)}, {"e", cell.e}});
        out["table"] = std::move(cells);
    }
    emit(cfg, "constants", out);
    return 0;
}

int run_table(const CliConfig& cfg, const io::ProblemSpec& spec) {
    if (!spec.region_lo || !spec.region_hi)
        throw std::invalid_argument("table: problem file must define \"region\" {lo, hi}");
    const WeightedPoly& f = require_poly(spec);
    SymbolTable table = build_symbol_table(
        f, annulus(f.ctx(), f.n(), *spec.region_lo, *spec.region_hi), spec.ropts);
    json cells = json::array();
    for (const SymbolCell& c : table.cells)
        cells.push_back(json{{"ball", io::ball_json(c.ball)}, {"e", c.e}});
    json unresolved = json::array();
    for (const TaggedCell& c : table.unresolved)
        unresolved.push_back(json{{"ball", io::ball_json(c.ball)}, {"ub_exp", c.ub_exp}});
    emit(cfg, "table",
         json{{"cells", std::move(cells)},
              {"unresolved", std::move(unresolved)},
              {"max_level", table.max_level}});
    return 0;
}

int run_norms(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const WeightedPoly& f = require_poly(spec);
    const auto q1 = check_quasihomogeneous(f);
    if (std::holds_alternative<MultiIndex>(q1))
        throw std::invalid_argument("norms: polynomial is not quasi-homogeneous");
    const XiMeta meta(std::get<long>(q1), f.weights());
    const SBFunction& fun = require_fun(spec);
    const SBFunction hat = fourier(fun);
    const bool phi_member = in_Phi(fun);

    json norms = json::array();
    for (double beta : spec.betas) {
        if (phi_member) {
            const NormReport r = norm_beta_fourier(hat, beta, meta, NormVariant::xi, spec.tol);
            norms.push_back(json{{"beta", io::json_real(beta)},
                                 {"variant", "xi"},
                                 {"value", io::json_real(r.value)},
                                 {"tail", io::json_real(r.tail_bound)}});
        }
        const NormReport r = norm_beta_fourier(hat, beta, meta, NormVariant::max_xi, spec.tol);
        norms.push_back(json{{"beta", io::json_real(beta)},
                             {"variant", "max_xi"},
                             {"value", io::json_real(r.value)},
                             {"tail", io::json_real(r.tail_bound)}});
    }
    json integrals = json::array();
    for (double beta : spec.betas) {
        json row{{"beta", io::json_real(beta)}};
        try {
            const IntegralReport r = I_beta(meta, f.ctx(), beta, spec.tol);
            row["value"] = io::json_real(r.value);
            row["tail"] = io::json_real(r.tail_bound);
        } catch (const std::domain_error& e) {
            row["error"] = e.what();
        }
        integrals.push_back(std::move(row));
    }
    emit(cfg, "norms",
         json{{"in_Phi", phi_member},
              {"norms", std::move(norms)},
              {"I", std::move(integrals)},
              {"metric_c_beta", "2^-beta"}});
    return 0;
}

int run_apply_solve(const CliConfig& cfg, const io::ProblemSpec& spec, bool inverse) {
    const QSymbol sym = make_qsymbol(require_poly(spec), spec.alpha, spec.copts, spec.ropts);
    const SBFunction& fun = require_fun(spec);
    const SBFunction result =
        inverse ? solve_q(sym, fun, spec.ropts) : apply_q(sym, fun, spec.ropts);
    emit(cfg, inverse ? "solve" : "apply",
         json{{"result", io::sbfunction_to_json(result)},
              {"constants", io::constants_json(sym.constants)}});
    return 0;
}

int run_taibleson(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const SBFunction result = apply_taibleson(spec.alpha, require_fun(spec));
    emit(cfg, "taibleson", json{{"result", io::sbfunction_to_json(result)}});
    return 0;
}

int run_var(const CliConfig& cfg, const io::ProblemSpec& spec, bool inverse) {
    QSymbol principal = make_qsymbol(require_poly(spec), spec.alpha, spec.copts, spec.ropts);
    const SQSymbol sym = make_sqsymbol(std::move(principal), spec.lower, spec.ropts);
    const SBFunction& fun = require_fun(spec);
    const SQResult result =
        inverse ? solve_sq(sym, fun, spec.ropts) : apply_sq(sym, fun, spec.ropts);
    json pieces = json::array();
    for (const SQPiece& piece : result.pieces) {
        pieces.push_back(json{{"values", io::rat_vector_json(piece.values)},
                              {"result", io::sbfunction_to_json(piece.value)}});
    }
    emit(cfg, inverse ? "solve-var" : "apply-var",
         json{{"M0", sym.M0}, {"pieces", std::move(pieces)}});
    return 0;
}

int run_heat_kernel(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const QSymbol sym = make_qsymbol(require_poly(spec), spec.alpha, spec.copts, spec.ropts);
    const PadicVector x = require_x(spec);
    if (spec.t_grid.empty()) throw std::invalid_argument("heat-kernel: empty t_grid");
    std::vector<KernelValue> values(spec.t_grid.size());
    std::vector<std::string> errors(spec.t_grid.size());
    parallel_for(spec.t_grid.size(), cfg.threads, [&](size_t i) {
        try {
            values[i] = heat_kernel(sym, x, spec.t_grid[i], spec.tol, spec.ropts);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (const std::string& err : errors)
        if (!err.empty()) throw std::runtime_error(err);

    json rows = json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (size_t i = 0; i < spec.t_grid.size(); ++i) {
        rows.push_back(json{{"t", io::json_real(spec.t_grid[i])},
                            {"x", io::rat_vector_json(x.coords)},
                            {"re", io::json_real(values[i].value.real())},
                            {"im", io::json_real(values[i].value.imag())},
                            {"tail_bound", io::json_real(values[i].tail_bound)}});
        csv_rows.push_back({real_string(spec.t_grid[i]), vec_string(x.coords),
                            real_string(values[i].value.real()),
                            real_string(values[i].tail_bound)});
    }
    if (!cfg.csv.empty()) io::write_csv(cfg.csv, {"t", "x", "Z", "tail_bound"}, csv_rows);
    emit(cfg, "heat-kernel", json{{"rows", std::move(rows)}});
    return 0;
}

int run_evolve(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const QSymbol sym = make_qsymbol(require_poly(spec), spec.alpha, spec.copts, spec.ropts);
    const SBFunction& fun = require_fun(spec);
    if (spec.t_grid.empty()) throw std::invalid_argument("evolve: empty t_grid");
    json states = json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (double t : spec.t_grid) {
        const SBFunction u = cauchy_evolve(sym, fun, t, spec.ropts);
        json entry{{"t", io::json_real(t)}, {"result", io::sbfunction_to_json(u)}};
        if (!spec.betas.empty()) {
            const SBFunction hat = fourier(u);
            json norms = json::array();
            for (double beta : spec.betas) {
                const NormReport r = norm_beta_fourier(hat, beta, sym.meta, NormVariant::xi, spec.tol);
                norms.push_back(json{{"beta", io::json_real(beta)},
                                     {"value", io::json_real(r.value)},
                                     {"tail", io::json_real(r.tail_bound)}});
                csv_rows.push_back({real_string(t), real_string(beta), real_string(r.value)});
            }
            entry["norms"] = std::move(norms);
        }
        states.push_back(std::move(entry));
    }
    if (!cfg.csv.empty()) io::write_csv(cfg.csv, {"t", "beta", "norm"}, csv_rows);
    json out{{"states", std::move(states)}};
    out["classical_scope"] = classical_scope(sym.poly);
    emit(cfg, "evolve", out);
    return 0;
}

int run_diagnose(const CliConfig& cfg, const io::ProblemSpec& spec) {
    const QSymbol sym = make_qsymbol(require_poly(spec), spec.alpha, spec.copts, spec.ropts);
    const SBFunction& fun = require_fun(spec);
    const auto rows = regularization_diagnostic(sym, fun, spec.t_grid, spec.betas, spec.ropts);
    json out = json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (const DiagnosticRow& row : rows) {
        out.push_back(json{{"t", io::json_real(row.t)},
                           {"beta", io::json_real(row.beta)},
                           {"norm", io::json_real(row.norm)},
                           {"tail", io::json_real(row.tail)}});
        csv_rows.push_back({real_string(row.t), real_string(row.beta), real_string(row.norm)});
    }
    if (!cfg.csv.empty()) io::write_csv(cfg.csv, {"t", "beta", "norm"}, csv_rows);
    json body{{"rows", std::move(out)}};
    body["classical_scope"] = classical_scope(sym.poly);
    emit(cfg, "diagnose", body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic quasielliptic pseudo-differential calculus"};
    app.require_subcommand(1);

    CliConfig cfg;
    const std::vector<std::string> commands = {"certify",   "constants", "table",    "norms",
                                               "apply",     "solve",     "taibleson", "apply-var",
                                               "solve-var", "heat-kernel", "evolve",  "diagnose"};
    std::map<std::string, CLI::App*> subs;
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", cfg.input, "problem file (JSON)")->required();
        sub->add_option("--output", cfg.output, "output file, '-' for stdout");
        sub->add_option("--csv", cfg.csv, "CSV mirror of the result table");
        sub->add_option("--threads", cfg.threads, "worker thread cap");
        sub->add_option("--tol", cfg.tol, "tolerance override");
        sub->add_option("--depth-cap", cfg.depth_cap, "refinement depth cap override");
        sub->add_option("--cell-budget", cfg.cell_budget, "cell budget override");
        sub->add_option("--seed", cfg.seed, "seed recorded in output metadata");
        sub->add_flag("--verbose", cfg.verbose, "include cell dumps where applicable");
        subs[name] = sub;
    }
    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const io::ProblemSpec spec = load_problem(cfg);
        if (command == "certify") return run_certify(cfg, spec);
        if (command == "constants") return run_constants(cfg, spec);
        if (command == "table") return run_table(cfg, spec);
        if (command == "norms") return run_norms(cfg, spec);
        if (command == "apply") return run_apply_solve(cfg, spec, false);
        if (command == "solve") return run_apply_solve(cfg, spec, true);
        if (command == "taibleson") return run_taibleson(cfg, spec);
        if (command == "apply-var") return run_var(cfg, spec, false);
        if (command == "solve-var") return run_var(cfg, spec, true);
        if (command == "heat-kernel") return run_heat_kernel(cfg, spec);
        if (command == "evolve") return run_evolve(cfg, spec);
        if (command == "diagnose") return run_diagnose(cfg, spec);
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    } catch (const NotQuasiellipticError& e) {
        json err{{"status", "witness"}, {"witness", io::witness_json(e.witness)}};
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
