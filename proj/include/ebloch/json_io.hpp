// SPDX-License-Identifier: Apache-2.0
//
// JSON encodings shared by the CLI and the tests. Complex numbers are always
// [re, im] pairs of doubles; array order is preserved, so a parse of a dump
// reproduces every lift bit-exactly.

#ifndef EBLOCH_JSON_IO_HPP
#define EBLOCH_JSON_IO_HPP

#include <json.hpp>

#include "ebloch/reduction.hpp"

namespace ebloch {

using nlohmann::json;

inline json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("json: expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const elliptic_function& f) {
    json j;
    j["tau"] = to_json(f.lat().tau());
    j["scale"] = to_json(f.scale());
    j["zeros"] = json::array();
    j["poles"] = json::array();
    for (const auto& z : f.zero_lifts()) j["zeros"].push_back(to_json(z));
    for (const auto& p : f.pole_lifts()) j["poles"].push_back(to_json(p));
    return j;
}

inline elliptic_function function_from_json(const json& j,
                                            std::shared_ptr<const theta_context> ctx = nullptr) {
    if (!j.is_object() || !j.contains("tau") || !j.contains("scale") || !j.contains("zeros") ||
        !j.contains("poles"))
        throw std::invalid_argument("json: function needs tau, scale, zeros, poles");
    cplx tau = cplx_from_json(j.at("tau"));
    if (!ctx) ctx = std::make_shared<theta_context>(lattice(tau));
    if (std::abs(ctx->lat().tau() - tau) > 0.0)
        throw std::invalid_argument("json: tau disagrees with the ambient lattice");
    cplx scale = cplx_from_json(j.at("scale"));
    std::vector<cplx> zeros, poles;
    for (const auto& e : j.at("zeros")) zeros.push_back(cplx_from_json(e));
    for (const auto& e : j.at("poles")) poles.push_back(cplx_from_json(e));
    if (zeros.empty() && poles.empty()) return elliptic_function::constant(scale, std::move(ctx));
    return elliptic_function::from_divisor(std::move(zeros), std::move(poles),
                                           elliptic_function::norm_scale{scale}, std::move(ctx));
}

inline json to_json(const reduction_certificate& c) {
    json j;
    j["target"] = to_json(c.target);
    j["steps"] = json::array();
    for (const auto& s : c.steps)
        j["steps"].push_back(json{{"x", to_json(s.x)}, {"y", to_json(s.y)}, {"sign", s.sign}});
    j["terminals"] = json::array();
    for (const auto& t : c.terminals.terms())
        j["terminals"].push_back(json{{"coeff", t.coeff}, {"f", to_json(t.fn)}});
    return j;
}

inline reduction_certificate certificate_from_json(const json& j) {
    if (!j.is_object() || !j.contains("target") || !j.contains("steps") || !j.contains("terminals"))
        throw std::invalid_argument("json: certificate needs target, steps, terminals");
    cplx tau = cplx_from_json(j.at("target").at("tau"));
    auto ctx = std::make_shared<theta_context>(lattice(tau));
    reduction_certificate c{function_from_json(j.at("target"), ctx), {}, {}};
    for (const auto& s : j.at("steps")) {
        int sign = s.at("sign").get<int>();
        if (sign != 1 && sign != -1) throw std::invalid_argument("json: step sign must be +-1");
        c.steps.push_back(
            {function_from_json(s.at("x"), ctx), function_from_json(s.at("y"), ctx), sign});
    }
    for (const auto& t : j.at("terminals"))
        c.terminals.add(function_from_json(t.at("f"), ctx), t.at("coeff").get<int>());
    return c;
}

inline json to_json(const ze_minus_sum& s) {
    json j;
    j["tau"] = to_json(s.lat().tau());
    j["terms"] = json::array();
    for (const auto& t : s.terms())
        j["terms"].push_back(json{{"point", to_json(t.point.lift())}, {"coeff", t.coeff}});
    return j;
}

inline ze_minus_sum ze_minus_from_json(const json& j) {
    lattice L(cplx_from_json(j.at("tau")));
    ze_minus_sum s(L);
    for (const auto& t : j.at("terms"))
        s.add(torus_point(cplx_from_json(t.at("point")), L), t.at("coeff").get<int>());
    return s;
}

inline json to_json(const function_sum& s, const lattice& L) {
    json j;
    j["tau"] = to_json(L.tau());
    j["terms"] = json::array();
    for (const auto& t : s.terms())
        j["terms"].push_back(json{{"coeff", t.coeff}, {"f", to_json(t.fn)}});
    return j;
}

inline json to_json(const decomposition& d, const lattice& L) {
    json j;
    j["tau"] = to_json(L.tau());
    j["instances"] = json::array();
    for (const auto& inst : d.instances) {
        json e;
        e["coeff"] = inst.coeff;
        for (const char* key : {"alpha", "beta", "gamma"}) e[key] = json::array();
        for (int i = 0; i < 3; ++i) {
            e["alpha"].push_back(to_json(inst.alpha[std::size_t(i)].lift()));
            e["beta"].push_back(to_json(inst.beta[std::size_t(i)].lift()));
            e["gamma"].push_back(to_json(inst.gamma[std::size_t(i)].lift()));
        }
        j["instances"].push_back(e);
    }
    j["report"] = json{{"relation_value", d.report.relation_value},
                       {"rel3_sum", d.report.rel3_sum},
                       {"analytic_ok", d.report.analytic_ok},
                       {"zeminus_ok", d.report.zeminus_ok}};
    return j;
}

}  // namespace ebloch

#endif
