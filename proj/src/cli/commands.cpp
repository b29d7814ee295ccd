/*
   Copyright 2026 The emergent authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "emergent/cli.hpp"

namespace emergent::cli {

using nlohmann::json;

namespace {

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json param_json(const Param& p) {
    json out = json::array();
    for (const auto& c : p.components()) out.push_back(complex_json(c));
    return out;
}

json vector_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
    return out;
}

Param param_from_json(const json& j, const ParamSpace& space) {
    if (!j.is_array()) throw ConfigError("map table entry is not an array of [re, im] pairs");
    std::vector<Complex> comps;
    for (const auto& c : j) {
        if (!c.is_array() || c.size() != 2) throw ConfigError("map table component is not an [re, im] pair");
        comps.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    try {
        return Param(space, std::move(comps));
    } catch (const Error& ex) {
        throw ConfigError(std::string("map table entry does not fit the parameter space: ") + ex.what());
    }
}

json provenance_json(const ProvenanceNode& n) {
    json out{{"step", n.step}, {"detail", n.detail}};
    if (!n.children.empty()) {
        out["children"] = json::array();
        for (const auto& c : n.children) out["children"].push_back(provenance_json(c));
    }
    return out;
}

json report_json(const VerificationReport& r) {
    json out{{"verdict", to_string(r.verdict)},
             {"samples", r.samples},
             {"seed", r.seed},
             {"tolerance", r.tolerance},
             {"max_action_residual", r.max_action_residual},
             {"max_operator_residual", r.max_operator_residual},
             {"levels_equivalent", r.levels_equivalent}};
    if (r.worst_eps) out["worst_eps"] = param_json(*r.worst_eps);
    if (!r.reason.empty()) out["reason"] = r.reason;
    if (!r.failed_step.empty()) {
        out["failed_step"] = r.failed_step;
        out["infeasible_residual"] = r.infeasible_residual;
    }
    return out;
}

std::vector<Param> table_eps(const ExperimentConfig& cfg) {
    std::mt19937_64 rng(cfg.seed ^ 0x7ab1e5eedULL);
    std::vector<Param> eps;
    for (int i = 0; i < cfg.map_samples; ++i) eps.push_back(sample_param(cfg.target_theory().space(), rng));
    return eps;
}

json map_table(const ParamMap& map, const std::vector<Param>& eps) {
    json table = json::array();
    for (const auto& e : eps) {
        json row{{"eps", param_json(e)}};
        try {
            row["F"] = param_json(map(e));
        } catch (const std::exception& ex) {
            row["F"] = nullptr;
            row["error"] = ex.what();
        }
        table.push_back(std::move(row));
    }
    return table;
}

VerifyOptions verify_options(const ExperimentConfig& cfg) { return VerifyOptions{cfg.samples, cfg.seed, cfg.tol}; }

struct Attempt {
    std::optional<EmergenceWitness> witness;
    std::string error;
};

Attempt run_combinator(const ExperimentConfig& cfg) {
    try {
        return {emerge_auto(cfg.target_theory(), cfg.ambient_theory(), verify_options(cfg)), {}};
    } catch (const Error& ex) {
        return {std::nullopt, ex.what()};
    } catch (const std::invalid_argument& ex) {
        return {std::nullopt, ex.what()};
    }
}

}  // namespace

json report_body(const json& report) {
    json body = report;
    body.erase("timing");
    return body;
}

RunOutcome cmd_synthesize(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const Theory& target = cfg.target_theory();
    const Theory& ambient = cfg.ambient_theory();
    const std::vector<Param> eps = table_eps(cfg);
    const bool use_comb = cfg.strategy != Strategy::oracle;
    const bool use_oracle = cfg.strategy != Strategy::combinator;

    json rep{{"engine", {{"name", "emergent"}, {"version", engine_version}}},
             {"config_digest", cfg.digest},
             {"strategy", to_string(cfg.strategy)},
             {"seed", cfg.seed},
             {"samples", cfg.samples},
             {"target", {{"name", cfg.target}, {"id", target.id()}, {"degree", target.degree()}}},
             {"ambient", {{"name", cfg.ambient}, {"id", ambient.id()}, {"degree", ambient.degree()}}}};

    bool comb_ok = false;
    std::optional<ParamMap> comb_map;
    if (use_comb) {
        Attempt a = run_combinator(cfg);
        json c;
        if (a.witness) {
            comb_ok = a.witness->verified();
            comb_map = a.witness->map;
            c = report_json(a.witness->report);
            c["provenance"] = provenance_json(a.witness->map.provenance());
            c["map"] = map_table(a.witness->map, eps);
        } else {
            c = {{"verdict", to_string(Verdict::infeasible)}, {"reason", a.error}};
        }
        rep["combinator"] = std::move(c);
    }

    bool oracle_ok = false;
    std::optional<ParamMap> orc_map;
    if (use_oracle) {
        json o;
        try {
            const OracleReport orc = oracle_solve(target, ambient, eps);
            o = {{"verdict", to_string(orc.verdict)},
                 {"rank", orc.rank},
                 {"unknowns", orc.unknowns},
                 {"tolerance", orc.tolerance},
                 {"max_residual", orc.max_residual},
                 {"min_residual", orc.min_residual}};
            json rows = json::array();
            for (const auto& s : orc.samples)
                rows.push_back({{"eps", param_json(s.eps)},
                                {"delta", vector_json(s.delta)},
                                {"residual", s.residual},
                                {"flagged", s.flagged},
                                {"verdict", to_string(s.verdict)}});
            o["table"] = std::move(rows);
            ParamMap m = oracle_map(target, ambient);
            const VerificationReport vr = verify_map(target, ambient, m, verify_options(cfg));
            o["verification"] = report_json(vr);
            oracle_ok = orc.verdict == OracleVerdict::emergent && vr.verdict == Verdict::verified;
            o["map"] = map_table(m, eps);
            orc_map = std::move(m);
        } catch (const Error& ex) {
            o = {{"verdict", "unavailable"}, {"reason", ex.what()}};
        }
        rep["oracle"] = std::move(o);
    }

    if (comb_map && orc_map && comb_ok && oracle_ok) {
        double worst = 0.0;
        for (const auto& e : eps) worst = std::max(worst, param_distance((*comb_map)(e), (*orc_map)(e)));
        rep["agreement"] = {{"compared", eps.size()}, {"max_relative_difference", worst}};
    }

    bool ok = false;
    switch (cfg.strategy) {
        case Strategy::combinator: ok = comb_ok; break;
        case Strategy::oracle: ok = oracle_ok; break;
        case Strategy::both: ok = comb_ok && oracle_ok; break;
    }
    if (cfg.strategy == Strategy::both) rep["verdicts_agree"] = comb_ok == oracle_ok;
    if (ok)
        rep["verdict"] = "verified";
    else if (use_comb && !comb_ok)
        rep["verdict"] = rep["combinator"]["verdict"];
    else
        rep["verdict"] = "refuted";
    if (use_comb)
        rep["map"] = rep["combinator"].value("map", json::array());
    else
        rep["map"] = rep["oracle"].value("map", json::array());

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep["timing"] = {{"seconds", secs}};

    std::ostringstream summary;
    summary << rep["verdict"].get<std::string>() << ": " << cfg.target << " from " << cfg.ambient << " ("
            << to_string(cfg.strategy) << ")";
    if (use_comb) {
        const auto& c = rep["combinator"];
        if (c.contains("max_action_residual")) summary << ", combinator residual " << c["max_action_residual"].get<double>();
        if (c.contains("reason")) summary << ", " << c["reason"].get<std::string>();
    }
    if (use_oracle && rep["oracle"].contains("max_residual"))
        summary << ", oracle residual " << rep["oracle"]["max_residual"].get<double>() << " ("
                << rep["oracle"]["verdict"].get<std::string>() << ")";
    return {std::move(rep), ok ? exit_verified : exit_failed, summary.str()};
}

RunOutcome cmd_verify(const ExperimentConfig& cfg, const json& prior) {
    const auto start = std::chrono::steady_clock::now();
    const Theory& target = cfg.target_theory();
    const Theory& ambient = cfg.ambient_theory();
    if (!prior.is_object() || !prior.contains("map") || !prior["map"].is_array())
        throw ConfigError("report has no map table");
    std::vector<std::pair<Param, Param>> table;
    for (const auto& row : prior["map"]) {
        if (!row.contains("eps") || !row.contains("F")) throw ConfigError("map table row lacks eps or F");
        if (row["F"].is_null()) continue;
        table.emplace_back(param_from_json(row["eps"], target.space()), param_from_json(row["F"], ambient.space()));
    }
    if (table.empty()) throw ConfigError("map table has no usable entries");

    ParamMap map(target.space(), ambient.space(),
                 [table](const Param& e) {
                     for (const auto& [k, v] : table)
                         if (k == e) return v;
                     throw InfeasibleStep("table lookup", "no entry for " + describe(e), 0.0);
                 },
                 {"table", "exact lookup in a prior map table", {}});
    std::vector<Param> eps;
    for (const auto& [k, v] : table) eps.push_back(k);
    const std::uint64_t field_seed = cfg.seed + 0x9e3779b97f4a7c15ULL;
    const VerificationReport vr = verify_at(target, ambient, map, eps, field_seed, cfg.samples, cfg.tol);

    json rep{{"engine", {{"name", "emergent"}, {"version", engine_version}}},
             {"config_digest", cfg.digest},
             {"command", "verify"},
             {"seed", cfg.seed},
             {"target", {{"name", cfg.target}, {"id", target.id()}}},
             {"ambient", {{"name", cfg.ambient}, {"id", ambient.id()}}},
             {"entries", table.size()},
             {"verification", report_json(vr)},
             {"verdict", to_string(vr.verdict)}};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep["timing"] = {{"seconds", secs}};
    std::ostringstream summary;
    summary << to_string(vr.verdict) << ": " << table.size() << " table entries, residual "
            << std::max(vr.max_action_residual, vr.max_operator_residual);
    if (!vr.reason.empty()) summary << ", " << vr.reason;
    return {std::move(rep), vr.verdict == Verdict::verified ? exit_verified : exit_failed, summary.str()};
}

namespace {

struct Flags {
    std::string config;
    std::string map;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
    std::optional<std::string> strategy;
};

void apply_flags(ExperimentConfig& cfg, const Flags& f) {
    if (f.seed) cfg.seed = *f.seed;
    if (f.samples) {
        if (*f.samples < 1) throw ConfigError("--samples must be positive");
        cfg.samples = *f.samples;
    }
    if (f.tol) cfg.tol = *f.tol;
    if (f.strategy) cfg.strategy = strategy_from_string(*f.strategy);
}

void emit(const RunOutcome& r, const std::string& out) {
    const std::string text = r.report.dump(2) + "\n";
    if (out.empty() || out == "-") {
        if (out == "-") std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot write report to '" + out + "'");
        f << text;
    }
    (out == "-" ? std::cerr : std::cout) << r.summary << "\n";
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Synthesize and verify emergence maps between parameterized theories"};
    app.require_subcommand(1);
    Flags flags;
    auto add_common = [&flags](CLI::App* sub) {
        sub->add_option("--config", flags.config, "experiment file")->required();
        sub->add_option("--seed", flags.seed, "random seed (overrides [run] seed)");
        sub->add_option("--samples", flags.samples, "verification samples (overrides [run] samples)");
        sub->add_option("--tol", flags.tol, "relative tolerance (overrides [run] tol)");
        sub->add_option("--out", flags.out, "report path, '-' for stdout");
        sub->add_option("--strategy", flags.strategy, "combinator, oracle or both");
    };
    CLI::App* synth = app.add_subcommand("synthesize", "build a map with the combinators and/or the oracle");
    add_common(synth);
    CLI::App* verify = app.add_subcommand("verify", "re-verify the map table of an earlier report");
    add_common(verify);
    verify->add_option("--map", flags.map, "report produced by synthesize")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        ExperimentConfig cfg = load_config(flags.config);
        apply_flags(cfg, flags);
        if (synth->parsed()) {
            const RunOutcome r = cmd_synthesize(cfg);
            emit(r, flags.out);
            return r.exit_code;
        }
        std::ifstream in(flags.map, std::ios::binary);
        if (!in) throw ConfigError("cannot read report '" + flags.map + "'");
        json prior;
        try {
            prior = json::parse(in);
        } catch (const json::exception& ex) {
            throw ConfigError(std::string("report is not valid JSON: ") + ex.what());
        }
        const RunOutcome r = cmd_verify(cfg, prior);
        emit(r, flags.out);
        return r.exit_code;
    } catch (const ConfigError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return exit_usage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return exit_failed;
    }
}

}  // namespace emergent::cli
