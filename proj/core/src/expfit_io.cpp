#include <json.hpp>

#include "giant_heom/errors.hpp"
#include "giant_heom/expfit.hpp"

namespace giant_heom::expfit {

namespace {

using json = nlohmann::ordered_json;

json part_to_json(const FitResult& part) {
    json terms = json::array();
    for (const ExpTerm& term : part.sum.terms()) {
        terms.push_back({{"c_re", term.c.real()},
                         {"c_im", term.c.imag()},
                         {"g_re", term.g.real()},
                         {"g_im", term.g.imag()}});
    }
    const FitReport& r = part.report;
    json report = {{"n_terms", r.n_terms},
                   {"rel_l2_error", r.rel_l2_error},
                   {"grid", {{"t_max", r.grid.t_max}, {"n_samples", r.grid.n_samples}, {"spacing", r.grid.spacing()}}},
                   {"iterations", r.iterations},
                   {"initial_order", r.initial_order},
                   {"merged_terms", r.merged_terms},
                   {"reflected_rates", r.reflected_rates},
                   {"converged", r.converged}};
    return {{"terms", std::move(terms)}, {"report", std::move(report)}};
}

FitResult part_from_json(const json& j, const char* name) {
    FitResult out;
    try {
        std::vector<ExpTerm> terms;
        for (const json& t : j.at("terms")) {
            terms.push_back({cplx{t.at("c_re").get<double>(), t.at("c_im").get<double>()},
                             cplx{t.at("g_re").get<double>(), t.at("g_im").get<double>()}});
        }
        out.sum = ExponentialSum{std::move(terms)};
        const json& r = j.at("report");
        out.report.n_terms = r.at("n_terms").get<std::size_t>();
        out.report.rel_l2_error = r.at("rel_l2_error").get<double>();
        out.report.grid.t_max = r.at("grid").at("t_max").get<double>();
        out.report.grid.n_samples = r.at("grid").at("n_samples").get<std::size_t>();
        out.report.iterations = r.at("iterations").get<std::size_t>();
        out.report.initial_order = r.value("initial_order", std::size_t{0});
        out.report.merged_terms = r.value("merged_terms", std::size_t{0});
        out.report.reflected_rates = r.value("reflected_rates", std::size_t{0});
        out.report.converged = r.at("converged").get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("fit JSON, ") + name + ": " + e.what());
    }
    if (out.report.n_terms != out.sum.size()) {
        throw ConfigError(std::string("fit JSON, ") + name + ": n_terms does not match the term list");
    }
    return out;
}

}  // namespace

std::string to_json(const BcfFit& fit) {
    json doc = {{"eps_r", fit.eps_r}, {"C_R", part_to_json(fit.real_part)}, {"C_I", part_to_json(fit.imag_part)}};
    return doc.dump(2) + "\n";
}

BcfFit from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("fit JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("fit JSON: top level must be an object");
    BcfFit out;
    try {
        out.eps_r = doc.at("eps_r").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("fit JSON: ") + e.what());
    }
    if (!doc.contains("C_R")) throw ConfigError("fit JSON: missing C_R");
    if (!doc.contains("C_I")) throw ConfigError("fit JSON: missing C_I");
    out.real_part = part_from_json(doc["C_R"], "C_R");
    out.imag_part = part_from_json(doc["C_I"], "C_I");
    return out;
}

}  // namespace giant_heom::expfit
