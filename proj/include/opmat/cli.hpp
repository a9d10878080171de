#pragma once

// Command-line front end: build, assemble, verify oracle, sweep.
// Exit codes: 0 success, 1 verification failure, 2 flag or input error.

#include "opmat/exactcheck.hpp"
#include "opmat/family.hpp"
#include "opmat/harness.hpp"
#include "opmat/io.hpp"
#include "opmat/operators.hpp"
#include "opmat/opmatrix.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace opmat::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;

/// Raised for inconsistent flags detected after parsing.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FamilyFlags {
    std::string name;
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    std::optional<std::string> lambda;

    void add_to(CLI::App& app) {
        app.add_option("--family", name, "basis family")
            ->required()
            ->check(CLI::IsMember({"jacobi", "gegenbauer", "chebyshev1", "chebyshev2", "chebyshev3", "chebyshev4",
                                   "legendre", "laguerre", "hermite", "bessel"}));
        app.add_option("--alpha", alpha, "jacobi alpha (decimal or p/q)");
        app.add_option("--beta", beta, "jacobi beta (decimal or p/q)");
        app.add_option("--lambda", lambda, "gegenbauer lambda (decimal or p/q)");
    }

    [[nodiscard]] Family family() const {
        auto param = [](const std::optional<std::string>& s) -> std::optional<Parameter> {
            if (!s) return std::nullopt;
            return parse_parameter(*s);
        };
        return make_family(name, param(alpha), param(beta), param(lambda));
    }
};

namespace detail {

inline Route route_of(bool explicit_route, bool recursive_route) {
    if (explicit_route) return Route::Explicit;
    if (recursive_route) return Route::Recursive;
    return Route::Automatic;
}

template <Field F>
F parse_value(const std::string& text) {
    auto r = parse_rational(text);
    if (!r) throw usage_error("malformed number '" + text + "'");
    return field_traits<F>::from_rational(*r);
}

/// Writes to --out when given, stdout otherwise.
inline void with_output(const std::optional<std::string>& path, std::ostream& stdout_stream,
                        const std::function<void(std::ostream&)>& write) {
    if (!path) {
        write(stdout_stream);
        return;
    }
    std::ofstream file(*path);
    if (!file) throw std::runtime_error("cannot open '" + *path + "' for writing");
    write(file);
}

}  // namespace detail

struct BuildOptions {
    FamilyFlags family;
    std::string matrix;
    std::optional<std::string> a;
    std::size_t n = 0;
    bool explicit_route = false;
    bool recursive_route = false;
    std::string format = "csv";
    std::string field = "double";
    std::optional<std::string> out;
};

template <Field F>
OperationalMatrix<F> build_matrix(const BuildOptions& o) {
    const auto family = o.family.family();
    const Route route = detail::route_of(o.explicit_route, o.recursive_route);
    if (route == Route::Explicit && o.matrix != "M" && !has_explicit_formulas(family)) {
        throw usage_error("--explicit is not available for " + family.name());
    }
    if (o.matrix == "Oax" && !o.a) throw usage_error("--matrix Oax needs --a");
    if (o.matrix != "Oax" && o.a) throw usage_error("--a applies to --matrix Oax only");
    if (o.matrix == "M") return shift_matrix<F>(family, o.n);
    if (o.matrix == "N") return derivative_matrix<F>(family, o.n, route);
    if (o.matrix == "O") return primitive_matrix<F>(family, o.n, route);
    return definite_integral_matrix<F>(family, o.n, detail::parse_value<F>(*o.a), route);
}

struct AssembleOptions {
    FamilyFlags family;
    std::size_t n = 0;
    std::string spec;
    bool explicit_route = false;
    bool recursive_route = false;
    std::string format = "csv";
    std::string field = "double";
    std::optional<std::string> out;
};

template <Field F>
Assembly<F> assemble_from_file(const AssembleOptions& o) {
    const auto family = o.family.family();
    const Route route = detail::route_of(o.explicit_route, o.recursive_route);
    if (route == Route::Explicit && !has_explicit_formulas(family)) {
        throw usage_error("--explicit is not available for " + family.name());
    }
    std::ifstream in(o.spec);
    if (!in) throw usage_error("cannot read operator spec '" + o.spec + "'");
    const auto spec = parse_operator_spec<F>(in);
    return assemble(spec, family, o.n, route);
}

struct VerifyOptions {
    FamilyFlags family;
    std::size_t n = 0;
};

/// One oracle comparison: a label and the first mismatch, if any.
struct OracleCheck {
    std::string label;
    std::optional<Mismatch> mismatch;
};

/// Every builder against the monomial oracle at size n.
inline std::vector<OracleCheck> oracle_checks(const Family& family, std::size_t n) {
    std::vector<OracleCheck> out;
    const auto m = oracle_matrix(OracleKind::Shift, family, n);
    const auto d = oracle_matrix(OracleKind::Derivative, family, n);
    const auto o = oracle_matrix(OracleKind::Primitive, family, n);
    out.push_back({"M", first_mismatch(shift_matrix<Rational>(family, n), m)});
    out.push_back({"N recursive", first_mismatch(derivative_matrix<Rational>(family, n, Route::Recursive), d)});
    out.push_back({"O recursive", first_mismatch(primitive_matrix<Rational>(family, n, Route::Recursive), o)});
    if (has_explicit_formulas(family)) {
        out.push_back({"N explicit", first_mismatch(derivative_matrix<Rational>(family, n, Route::Explicit), d)});
        out.push_back({"O explicit", first_mismatch(primitive_matrix<Rational>(family, n, Route::Explicit), o)});
    }
    std::vector<Rational> limits{make_rational(-1), make_rational(0), make_rational(1, 3)};
    for (const auto& a : limits) {
        const auto oa = oracle_matrix(OracleKind::DefiniteIntegral, family, n, a);
        out.push_back({"Oax a=" + a.get_str(), first_mismatch(definite_integral_matrix<Rational>(family, n, a), oa)});
    }
    if (const auto limit = canonical_lower_limit(family)) {
        const Rational a = make_rational(*limit);
        const auto oa = oracle_matrix(OracleKind::DefiniteIntegral, family, n, a);
        out.push_back({"Oax closed-form row 0 a=" + a.get_str(),
                       first_mismatch(definite_integral_matrix<Rational>(family, n, a, Route::Automatic,
                                                                         Row0Method::ClosedForm),
                                      oa)});
    }
    return out;
}

struct SweepOptions {
    std::string test;
    FamilyFlags family;
    std::size_t nmin = 0;
    std::size_t nmax = 1000;
    std::size_t step = 20;
    std::vector<std::size_t> ks;
    std::string z = "1/10";
    unsigned threads = 0;
    std::optional<std::string> out;
};

inline SweepGrid sweep_grid(const SweepOptions& o) {
    SweepGrid g;
    if (o.step == 0) throw usage_error("--step must be positive");
    g.step = o.step;
    g.n_min = o.nmin == 0 ? o.step : o.nmin;
    g.n_max = o.nmax;
    if (g.n_min > g.n_max) throw usage_error("--nmin exceeds --nmax");
    g.ks = o.ks;
    const auto z = parse_rational(o.z);
    if (!z) throw usage_error("malformed --z '" + o.z + "'");
    g.z = z->get_d();
    g.z_text = o.z;
    return g;
}

/// Parses argv and runs the selected subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Operational matrices for orthogonal polynomial bases"};
    app.name("opmat");
    app.require_subcommand(1);

    BuildOptions build;
    auto* build_cmd = app.add_subcommand("build", "emit M, N, O or O_a^x");
    build.family.add_to(*build_cmd);
    build_cmd->add_option("--matrix", build.matrix, "matrix kind")->required()->check(CLI::IsMember({"M", "N", "O", "Oax"}));
    build_cmd->add_option("--a", build.a, "lower limit for Oax (decimal or p/q)");
    build_cmd->add_option("--n", build.n, "truncation size")->required()->check(CLI::PositiveNumber);
    auto* ex = build_cmd->add_flag("--explicit", build.explicit_route, "closed-form builders");
    auto* rec = build_cmd->add_flag("--recursive", build.recursive_route, "general recursions");
    ex->excludes(rec);
    build_cmd->add_option("--format", build.format, "csv or coo")->check(CLI::IsMember({"csv", "coo"}));
    build_cmd->add_option("--field", build.field, "double or rational")->check(CLI::IsMember({"double", "rational"}));
    build_cmd->add_option("--out", build.out, "output file (default stdout)");

    AssembleOptions asm_opts;
    auto* asm_cmd = app.add_subcommand("assemble", "emit the matrix of an operator spec file");
    asm_opts.family.add_to(*asm_cmd);
    asm_cmd->add_option("--n", asm_opts.n, "truncation size")->required()->check(CLI::PositiveNumber);
    asm_cmd->add_option("--spec", asm_opts.spec, "operator spec file")->required();
    auto* aex = asm_cmd->add_flag("--explicit", asm_opts.explicit_route, "closed-form builders");
    auto* arec = asm_cmd->add_flag("--recursive", asm_opts.recursive_route, "general recursions");
    aex->excludes(arec);
    asm_cmd->add_option("--format", asm_opts.format, "csv or coo")->check(CLI::IsMember({"csv", "coo"}));
    asm_cmd->add_option("--field", asm_opts.field, "double or rational")->check(CLI::IsMember({"double", "rational"}));
    asm_cmd->add_option("--out", asm_opts.out, "output file (default stdout)");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "exact verification");
    verify_cmd->require_subcommand(1);
    auto* oracle_cmd = verify_cmd->add_subcommand("oracle", "compare every builder with the monomial oracle");
    verify.family.add_to(*oracle_cmd);
    oracle_cmd->add_option("--n", verify.n, "truncation size")->required()->check(CLI::PositiveNumber);

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "residual sweep written as CSV");
    sweep_cmd->add_option("--test", sw.test, "diffeq, moments or genfun")
        ->required()
        ->check(CLI::IsMember({"diffeq", "moments", "genfun"}));
    sw.family.add_to(*sweep_cmd);
    sweep_cmd->add_option("--nmin", sw.nmin, "first n (default: step)");
    sweep_cmd->add_option("--nmax", sw.nmax, "last n");
    sweep_cmd->add_option("--step", sw.step, "n increment");
    sweep_cmd->add_option("--k", sw.ks, "k values (moments, genfun)");
    sweep_cmd->add_option("--z", sw.z, "generating-function argument (decimal or p/q)");
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (default: hardware)");
    sweep_cmd->add_option("--out", sw.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_usage;
    }

    try {
        if (build_cmd->parsed()) {
            const auto format = parse_matrix_format(build.format);
            if (build.field == "rational") {
                const auto m = build_matrix<Rational>(build);
                detail::with_output(build.out, out, [&](std::ostream& s) { write_matrix(s, m, format); });
            } else {
                const auto m = build_matrix<double>(build);
                detail::with_output(build.out, out, [&](std::ostream& s) { write_matrix(s, m, format); });
            }
            return exit_ok;
        }
        if (asm_cmd->parsed()) {
            const auto format = parse_matrix_format(asm_opts.format);
            auto emit = [&](const auto& assembly) {
                if (assembly.last_valid_column) {
                    err << "valid columns: 0.." << *assembly.last_valid_column << '\n';
                } else {
                    err << "valid columns: none\n";
                }
                detail::with_output(asm_opts.out, out, [&](std::ostream& s) { write_matrix(s, assembly.matrix, format); });
            };
            if (asm_opts.field == "rational") {
                emit(assemble_from_file<Rational>(asm_opts));
            } else {
                emit(assemble_from_file<double>(asm_opts));
            }
            return exit_ok;
        }
        if (oracle_cmd->parsed()) {
            const auto family = verify.family.family();
            bool ok = true;
            for (const auto& check : oracle_checks(family, verify.n)) {
                if (check.mismatch) {
                    ok = false;
                    out << check.label << ": mismatch at " << check.mismatch->str() << '\n';
                } else {
                    out << check.label << ": ok\n";
                }
            }
            return ok ? exit_ok : exit_verify_failed;
        }
        if (sweep_cmd->parsed()) {
            const auto family = sw.family.family();
            const auto rows = sweep(parse_test_id(sw.test), family, sweep_grid(sw), sw.threads);
            detail::with_output(sw.out, out, [&](std::ostream& s) { write_csv(s, rows); });
            return exit_ok;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace opmat::cli
