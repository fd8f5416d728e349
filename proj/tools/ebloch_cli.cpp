// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. JSON in, JSON or decimals out; exit codes:
// 0 pass, 2 input error, 3 numerical failure, 4 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ebloch/ebloch.hpp"
#include "ebloch/json_io.hpp"

namespace {

using namespace ebloch;

cplx parse_complex(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected RE,IM, got '" + s + "'");
    std::size_t used = 0;
    double re = std::stod(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("bad real part in '" + s + "'");
    std::string imp = s.substr(comma + 1);
    double im = std::stod(imp, &used);
    if (used != imp.size()) throw std::invalid_argument("bad imaginary part in '" + s + "'");
    return {re, im};
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

void print_value(const proj_value& v) {
    if (v.is_inf())
        std::printf("inf\n");
    else if (v.value().imag() == 0.0)
        std::printf("%.17g\n", v.value().real());
    else
        std::printf("%.17g%+.17gi\n", v.value().real(), v.value().imag());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic dilogarithm and Bloch-relation toolkit"};
    app.require_subcommand(1);

    double eps = 1e-8, tol_analytic = 1e-6;
    app.add_option("--eps", eps, "point-matching tolerance")->capture_default_str();
    app.add_option("--tol-analytic", tol_analytic, "tolerance for q-series sums")
        ->capture_default_str();

    std::string z_str, tau_str, xi_str, in_path, out_path, cert_path, report;
    int fn_degree = 4;
    std::uint64_t seed = 0;

    auto* cmd_dilog = app.add_subcommand("dilog", "Bloch-Wigner function D(z)");
    cmd_dilog->add_option("--z", z_str, "argument as RE,IM")->required();

    auto* cmd_edilog = app.add_subcommand("edilog", "elliptic dilogarithm D_tau(xi)");
    cmd_edilog->add_option("--tau", tau_str, "lattice parameter as RE,IM")->required();
    cmd_edilog->add_option("--xi", xi_str, "point of E as a complex lift RE,IM")->required();

    auto* cmd_fn = app.add_subcommand("fn", "elliptic function utilities");
    cmd_fn->require_subcommand(1);
    auto* fn_random = cmd_fn->add_subcommand("random", "draw a random function");
    fn_random->add_option("--tau", tau_str)->required();
    fn_random->add_option("--degree", fn_degree)->required();
    fn_random->add_option("--seed", seed)->capture_default_str();
    fn_random->add_option("-o,--out", out_path)->required();
    auto* fn_eval = cmd_fn->add_subcommand("eval", "evaluate a function");
    fn_eval->add_option("-f,--function", in_path)->required();
    fn_eval->add_option("--z", z_str)->required();
    auto* fn_one_minus = cmd_fn->add_subcommand("one-minus", "1 - f with certified divisor");
    fn_one_minus->add_option("-f,--function", in_path)->required();
    fn_one_minus->add_option("-o,--out", out_path)->required();

    auto* cmd_bloch = app.add_subcommand("bloch", "elliptic Bloch relations");
    cmd_bloch->require_subcommand(1);
    auto* bloch_verify = cmd_bloch->add_subcommand("verify", "check the zero-sum relation for f");
    bloch_verify->add_option("-f,--function", in_path)->required();
    bloch_verify->add_option("--report", report, "'residuals' for per-check details");
    auto* bloch_decompose =
        cmd_bloch->add_subcommand("decompose", "decompose into nine-point relations");
    bloch_decompose->add_option("-f,--function", in_path)->required();
    bloch_decompose->add_option("-o,--out", out_path)->required();
    bloch_decompose->add_option("--seed", seed)->capture_default_str();

    auto* cmd_reduce = app.add_subcommand("reduce", "emit a degree-reduction certificate");
    cmd_reduce->add_option("-f,--function", in_path)->required();
    cmd_reduce->add_option("-o,--out", out_path)->required();
    cmd_reduce->add_option("--seed", seed)->capture_default_str();

    auto* cmd_cert = app.add_subcommand("cert", "certificate operations");
    cmd_cert->require_subcommand(1);
    auto* cert_verify = cmd_cert->add_subcommand("verify", "replay and check a certificate");
    cert_verify->add_option("-c,--certificate", cert_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    tol().eps = eps;
    tol().tol_analytic = tol_analytic;

    try {
        if (cmd_dilog->parsed()) {
            std::printf("%.17g\n", bloch_wigner(parse_complex(z_str)));
            return 0;
        }
        if (cmd_edilog->parsed()) {
            lattice L(parse_complex(tau_str));
            std::printf("%.17g\n", edilog(torus_point(parse_complex(xi_str), L)));
            return 0;
        }
        if (fn_random->parsed()) {
            auto ctx = std::make_shared<theta_context>(lattice(parse_complex(tau_str)));
            save_json(out_path, to_json(random_function(fn_degree, seed, ctx)));
            return 0;
        }
        if (fn_eval->parsed()) {
            elliptic_function f = function_from_json(load_json(in_path));
            print_value(f(parse_complex(z_str)));
            return 0;
        }
        if (fn_one_minus->parsed()) {
            elliptic_function f = function_from_json(load_json(in_path));
            save_json(out_path, to_json(one_minus(f)));
            return 0;
        }
        if (bloch_verify->parsed()) {
            elliptic_function f = function_from_json(load_json(in_path));
            if (f.is_constant() || f.degree() <= 2) {
                ze_minus_sum db = delta_beta(f);
                std::printf("formal_zero %s\n", db.is_zero() ? "true" : "false");
                if (!db.is_zero()) return 4;
                return 0;
            }
            bloch_relation_report rep = bloch_relation_check(f);
            double residual = std::abs(rep.relation_value);
            if (report == "residuals") {
                std::printf("relation_value %.17g\n", rep.relation_value);
                std::printf("shadow_value %.17g\n", rep.shadow_value);
                std::printf("cross_check %.17g\n",
                            std::abs(rep.relation_value - rep.shadow_value));
            }
            std::printf("residual %.17g\n", residual);
            return residual < tol().tol_analytic ? 0 : 4;
        }
        if (bloch_decompose->parsed()) {
            elliptic_function f = function_from_json(load_json(in_path));
            reduce_budget budget;
            budget.seed = seed;
            decomposition dec = decompose_bloch_relation(f, budget);
            save_json(out_path, to_json(dec, f.lat()));
            std::printf("instances %zu analytic_ok %s zeminus_ok %s\n", dec.instances.size(),
                        dec.report.analytic_ok ? "true" : "false",
                        dec.report.zeminus_ok ? "true" : "false");
            return dec.report.pass() ? 0 : 4;
        }
        if (cmd_reduce->parsed()) {
            elliptic_function f = function_from_json(load_json(in_path));
            reduce_budget budget;
            budget.seed = seed;
            reduction_certificate cert = reduce(f, budget);
            save_json(out_path, to_json(cert));
            std::printf("steps %zu terminals %zu\n", cert.steps.size(),
                        cert.terminals.terms().size());
            return 0;
        }
        if (cert_verify->parsed()) {
            reduction_certificate cert = certificate_from_json(load_json(cert_path));
            verify_report rep = verify_certificate(cert);
            std::printf("formal %s\n", rep.formal_ok ? "pass" : "fail");
            std::printf("zeminus %s\n", rep.zeminus_ok ? "pass" : "fail");
            std::printf("analytic %s (%.3e)\n", rep.analytic_ok ? "pass" : "fail",
                        rep.analytic_value);
            return rep.pass() ? 0 : 4;
        }
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    }
    return 2;
}
