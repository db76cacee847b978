#include "semirv/json_io.hpp"

#include "semirv/errors.hpp"

namespace semirv {

using nlohmann::json;

json to_json(const TailFunctionSpec& spec) {
    json params;
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                params = {{"c", fam.c}};
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                params = {{"gamma", fam.gamma}, {"c", fam.c}};
            } else if constexpr (std::is_same_v<T, LogLogPowerFamily>) {
                params = {{"gamma", fam.gamma}, {"c", fam.c}};
            } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
                params = {{"C", fam.C}, {"beta", fam.beta}, {"D", fam.D}};
            } else if constexpr (std::is_same_v<T, PiecewiseOscillatingFamily>) {
                params = json::object();
            } else if constexpr (std::is_same_v<T, KaramataFamily>) {
                params = {{"c0", fam.c0},
                          {"eps_coeff", fam.eps_coeff},
                          {"eps_power", fam.eps_power},
                          {"a0", fam.a0}};
            }
        },
        spec.family());
    return {{"family", spec.family_name()},
            {"params", params},
            {"lattice", spec.lattice()}};
}

TailFunctionSpec tailfn_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family")) {
        throw InvalidSpecError("tail function: expected {family, params, lattice}");
    }
    const std::string family = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    const bool lattice = j.value("lattice", false);
    auto get = [&](const char* name, double fallback) {
        return params.value(name, fallback);
    };

    if (family == "constant") {
        return TailFunctionSpec(ConstantFamily{get("c", 1.0)}, lattice);
    }
    if (family == "log_power") {
        return TailFunctionSpec(LogPowerFamily{get("gamma", 0.0), get("c", 1.0)},
                                lattice);
    }
    if (family == "log_log_power") {
        return TailFunctionSpec(LogLogPowerFamily{get("gamma", 0.0), get("c", 1.0)},
                                lattice);
    }
    if (family == "exp_power") {
        return TailFunctionSpec(
            ExpPowerFamily{get("C", 1.0), get("beta", 0.5), get("D", 0.0)}, lattice);
    }
    if (family == "piecewise_oscillating") {
        return TailFunctionSpec(PiecewiseOscillatingFamily{}, lattice);
    }
    if (family == "karamata") {
        return TailFunctionSpec(
            KaramataFamily{get("c0", 1.0), get("eps_coeff", 0.5),
                           get("eps_power", 0.5), get("a0", 2.718281828459045)},
            lattice);
    }
    throw InvalidSpecError("tail function: unknown family '" + family + "'");
}

json to_json(const SemiRVDistribution& dist) {
    return {{"alpha", dist.alpha()},
            {"f", to_json(dist.f())},
            {"kind", dist.dist_kind() == DistKind::Lattice ? "lattice" : "continuous"}};
}

SemiRVDistribution dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("alpha") || !j.contains("f")) {
        throw InvalidSpecError("distribution: expected {alpha, f, kind}");
    }
    const double alpha = j.at("alpha").get<double>();
    const std::string kind = j.value("kind", "continuous");
    if (kind != "continuous" && kind != "lattice") {
        throw InvalidSpecError("distribution: kind must be continuous or lattice");
    }
    return SemiRVDistribution::make(
        alpha, tailfn_from_json(j.at("f")),
        kind == "lattice" ? DistKind::Lattice : DistKind::Continuous);
}

json to_json(const RiskModelConfig& config) {
    json ins = json::array();
    json fin = json::array();
    for (const auto& d : config.insurance) ins.push_back(to_json(d.f()));
    for (const auto& d : config.financial) fin.push_back(to_json(d.f()));
    json neg;
    if (config.negative_part == NegativePartPolicy::None) {
        neg = "none";
    } else {
        neg = {{"shifted_exp", {{"rate", config.shifted_exp_rate}}}};
    }
    return {{"n", config.n},
            {"alpha", config.alpha},
            {"insurance", ins},
            {"financial", fin},
            {"negative_part", neg}};
}

RiskModelConfig risk_config_from_json(const json& j) {
    if (!j.is_object() || !j.contains("alpha") || !j.contains("insurance") ||
        !j.contains("financial")) {
        throw InvalidSpecError(
            "risk config: expected {n, alpha, insurance, financial, negative_part}");
    }
    std::vector<TailFunctionSpec> ins, fin;
    for (const auto& item : j.at("insurance")) ins.push_back(tailfn_from_json(item));
    for (const auto& item : j.at("financial")) fin.push_back(tailfn_from_json(item));

    NegativePartPolicy policy = NegativePartPolicy::None;
    double rate = 1.0;
    if (j.contains("negative_part") && !j.at("negative_part").is_null()) {
        const json& neg = j.at("negative_part");
        if (neg.is_string() && neg.get<std::string>() == "none") {
            policy = NegativePartPolicy::None;
        } else if (neg.is_object() && neg.contains("shifted_exp")) {
            policy = NegativePartPolicy::ShiftedExp;
            rate = neg.at("shifted_exp").value("rate", 1.0);
        } else {
            throw InvalidSpecError("risk config: bad negative_part");
        }
    }
    auto cfg = RiskModelConfig::make(j.at("alpha").get<double>(), std::move(ins),
                                     std::move(fin), policy, rate);
    if (j.contains("n") && j.at("n").get<int>() != cfg.n) {
        throw InvalidSpecError("risk config: n does not match the list lengths");
    }
    return cfg;
}

}  // namespace semirv
