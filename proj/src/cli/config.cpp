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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "emergent/cli.hpp"

namespace emergent::cli {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::combinator: return "combinator";
        case Strategy::oracle: return "oracle";
        case Strategy::both: return "both";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "combinator") return Strategy::combinator;
    if (s == "oracle") return Strategy::oracle;
    if (s == "both") return Strategy::both;
    throw ConfigError("unknown strategy '" + s + "' (expected combinator, oracle or both)");
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

double parse_real(const std::string& text) {
    std::string t = trim(text);
    if (t.size() > 1 && t[0] == '+') t.erase(0, 1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw std::invalid_argument("not a number: '" + t + "'");
    return v;
}

long long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw std::invalid_argument("not an integer: '" + t + "'");
    return v;
}

struct Entry {
    std::string value;
    int line;
};

struct Section {
    std::string name;
    int line;
    std::map<std::string, Entry> keys;
    std::set<std::string> used;

    [[noreturn]] void fail(const std::string& msg, int at = 0) const {
        throw ConfigError("line " + std::to_string(at ? at : line) + ": [" + name + "] " + msg);
    }

    std::optional<Entry> get(const std::string& key) {
        used.insert(key);
        auto it = keys.find(key);
        if (it == keys.end()) return std::nullopt;
        return it->second;
    }

    Entry require(const std::string& key) {
        auto e = get(key);
        if (!e) fail("missing key '" + key + "'");
        return *e;
    }

    template <typename F>
    auto convert(const Entry& e, F f) -> decltype(f(e.value)) {
        try {
            return f(e.value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            fail(ex.what(), e.line);
        }
    }

    void reject_unknown() const {
        for (const auto& [k, e] : keys)
            if (!used.count(k)) fail("unknown key '" + k + "'", e.line);
    }
};

std::vector<Section> read_sections(const std::string& text) {
    std::vector<Section> sections;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty()) throw ConfigError("line " + std::to_string(line) + ": empty section name");
            if (auto it = seen.find(name); it != seen.end())
                throw ConfigError("line " + std::to_string(line) + ": duplicate section [" + name +
                                  "], first defined at line " + std::to_string(it->second));
            seen[name] = line;
            sections.push_back({name, line, {}, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        if (sections.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
        auto& sec = sections.back();
        if (auto it = sec.keys.find(key); it != sec.keys.end())
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "', first set at line " +
                              std::to_string(it->second.line));
        sec.keys.emplace(key, Entry{value, line});
    }
    return sections;
}

Grid build_grid(Section& sec) {
    const Entry sizes_e = sec.require("sizes");
    const Entry spacing_e = sec.require("spacing");
    std::vector<int> sizes;
    for (const auto& w : split(sizes_e.value, ','))
        sizes.push_back(static_cast<int>(sec.convert(Entry{w, sizes_e.line}, parse_integer)));
    std::vector<double> spacing;
    for (const auto& w : split(spacing_e.value, ',')) spacing.push_back(sec.convert(Entry{w, spacing_e.line}, parse_real));
    if (spacing.size() == 1 && sizes.size() > 1) spacing.assign(sizes.size(), spacing.front());
    int dim = static_cast<int>(sizes.size());
    if (auto d = sec.get("dim")) dim = static_cast<int>(sec.convert(*d, parse_integer));
    sec.reject_unknown();
    try {
        return make_grid(dim, sizes, spacing);
    } catch (const std::invalid_argument& ex) {
        sec.fail(ex.what());
    }
}

// "c @ a1 a2 ; c @ a1 a2" with one exponent per axis or variable
std::vector<std::pair<Complex, std::vector<int>>> parse_terms(Section& sec, const Entry& e, std::size_t arity) {
    std::vector<std::pair<Complex, std::vector<int>>> out;
    for (const auto& item : split(e.value, ';')) {
        if (item.empty()) continue;
        const auto at = item.find('@');
        if (at == std::string::npos) sec.fail("term '" + item + "' needs the form 'coefficient @ exponents'", e.line);
        const Complex c = sec.convert(Entry{trim(item.substr(0, at)), e.line}, parse_complex);
        std::vector<int> alpha;
        for (const auto& w : words(item.substr(at + 1)))
            alpha.push_back(static_cast<int>(sec.convert(Entry{w, e.line}, parse_integer)));
        if (alpha.size() != arity)
            sec.fail("term '" + item + "' has " + std::to_string(alpha.size()) + " exponents, expected " +
                         std::to_string(arity),
                     e.line);
        out.emplace_back(c, std::move(alpha));
    }
    if (out.empty()) sec.fail("no terms given", e.line);
    return out;
}

Operator build_operator(Section& sec, const Grid& grid) {
    const std::string kind = sec.require("kind").value;
    if (kind == "stencil") {
        StencilSpec spec;
        for (auto& [c, alpha] : parse_terms(sec, sec.require("terms"), static_cast<std::size_t>(grid.dim())))
            spec.terms.push_back({alpha, c});
        DerivativeScheme scheme = DerivativeScheme::central_difference;
        if (auto s = sec.get("scheme")) {
            if (s->value == "spectral")
                scheme = DerivativeScheme::spectral;
            else if (s->value != "central")
                sec.fail("unknown scheme '" + s->value + "' (expected central or spectral)", s->line);
        }
        sec.reject_unknown();
        return diff_operator(grid, spec, scheme);
    }
    if (kind == "symbol") {
        const Entry v = sec.require("values");
        const auto items = split(v.value, ',');
        if (static_cast<Eigen::Index>(items.size()) != grid.point_count())
            sec.fail("symbol has " + std::to_string(items.size()) + " values, grid has " +
                         std::to_string(grid.point_count()) + " points",
                     v.line);
        CVector s(grid.point_count());
        for (std::size_t i = 0; i < items.size(); ++i)
            s[static_cast<Eigen::Index>(i)] = sec.convert(Entry{items[i], v.line}, parse_complex);
        sec.reject_unknown();
        return Operator::from_symbol(grid, std::move(s));
    }
    sec.fail("unknown operator kind '" + kind + "' (expected stencil or symbol)");
}

ParamSpace read_space(Section& sec, const char* degree_key = "degree") {
    ParamSpace space{ParamKind::nonzero_real, 1};
    if (auto s = sec.get("space")) space.kind = sec.convert(*s, param_kind_from_string);
    if (degree_key)
        if (auto d = sec.get(degree_key)) space.degree = static_cast<int>(sec.convert(*d, parse_integer));
    return space;
}

CoeffFn read_coeff(Section& sec, Complex c, int line) {
    int k = 1;
    if (auto e = sec.get("exponent")) k = static_cast<int>(sec.convert(*e, parse_integer));
    try {
        return k == 1 ? CoeffFn::linear(c) : CoeffFn::power(c, k);
    } catch (const std::invalid_argument& ex) {
        sec.fail(ex.what(), line);
    }
}

}  // namespace

Complex parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw std::invalid_argument("empty number");
    if (t.back() != 'i') return parse_real(t);
    t.pop_back();
    // split "a+b" / "a-b" at the last sign that is not an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;)
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            cut = i;
            break;
        }
    auto imag_part = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real(s);
    };
    if (cut == std::string::npos) return {0.0, imag_part(t)};
    return {parse_real(t.substr(0, cut)), imag_part(t.substr(cut))};
}

ExperimentConfig parse_config(const std::string& text) {
    std::vector<Section> sections = read_sections(text);
    Section* grid_sec = nullptr;
    Section* task = nullptr;
    Section* run_sec = nullptr;
    std::map<std::string, Section*> op_secs, th_secs;
    for (auto& s : sections) {
        if (s.name == "grid")
            grid_sec = &s;
        else if (s.name == "emergence")
            task = &s;
        else if (s.name == "run")
            run_sec = &s;
        else if (s.name.rfind("operator.", 0) == 0 && s.name.size() > 9)
            op_secs[s.name.substr(9)] = &s;
        else if (s.name.rfind("theory.", 0) == 0 && s.name.size() > 7)
            th_secs[s.name.substr(7)] = &s;
        else
            s.fail("unknown section");
    }
    if (!grid_sec) throw ConfigError("missing [grid] section");
    if (!task) throw ConfigError("missing [emergence] section");

    ExperimentConfig cfg{.grid = build_grid(*grid_sec)};
    cfg.digest = fnv1a_hex(text);
    for (auto& [name, sec] : op_secs) cfg.operators.emplace(name, build_operator(*sec, cfg.grid));

    auto op_ref = [&](Section& sec, const Entry& e, const std::string& name) -> const Operator& {
        auto it = cfg.operators.find(name);
        if (it == cfg.operators.end()) sec.fail("dangling reference to operator '" + name + "'", e.line);
        return it->second;
    };

    std::set<std::string> building;
    std::function<const Theory&(const std::string&, Section&, int)> theory;
    theory = [&](const std::string& name, Section& from, int line) -> const Theory& {
        if (auto it = cfg.theories.find(name); it != cfg.theories.end()) return it->second;
        auto sit = th_secs.find(name);
        if (sit == th_secs.end()) from.fail("dangling reference to theory '" + name + "'", line);
        Section& sec = *sit->second;
        if (building.count(name)) sec.fail("theory '" + name + "' refers to itself");
        building.insert(name);
        const Entry kind_e = sec.require("kind");
        const std::string& kind = kind_e.value;
        std::optional<Theory> t;
        try {
            if (kind == "scaling") {
                const Entry oe = sec.require("operator");
                const ParamSpace space = read_space(sec);
                t = scaling_theory(space, op_ref(sec, oe, oe.value), name);
            } else if (kind == "monomial") {
                const Entry oe = sec.require("operator");
                const ParamSpace space = read_space(sec);
                int p = 1;
                if (auto pe = sec.get("power")) p = static_cast<int>(sec.convert(*pe, parse_integer));
                Complex c = 1.0;
                int cl = sec.line;
                if (auto ce = sec.get("coeff")) {
                    c = sec.convert(*ce, parse_complex);
                    cl = ce->line;
                }
                t = monomial_theory(read_coeff(sec, c, cl), op_ref(sec, oe, oe.value), p, space, name);
            } else if (kind == "polynomial") {
                const Entry ve = sec.require("variables");
                Poly poly;
                for (const auto& v : split(ve.value, ',')) poly.variables.push_back(op_ref(sec, ve, v));
                const ParamSpace space = read_space(sec, nullptr);
                poly.kind = space.kind;
                if (auto sd = sec.get("slot_degree")) poly.slot_degree = static_cast<int>(sec.convert(*sd, parse_integer));
                const Entry te = sec.require("terms");
                int slot = 0;
                for (auto& [c, alpha] : parse_terms(sec, te, poly.variables.size()))
                    poly.terms.push_back({alpha, read_coeff(sec, c, te.line), slot++});
                t = polynomial_theory(poly, name);
            } else if (kind == "sum" || kind == "compose") {
                const Entry oe = sec.require("of");
                const auto parts = split(oe.value, ',');
                if (parts.size() < 2) sec.fail("'of' needs at least two theories", oe.line);
                Theory acc = theory(parts[0], sec, oe.line);
                for (std::size_t i = 1; i < parts.size(); ++i) {
                    const Theory& next = theory(parts[i], sec, oe.line);
                    acc = kind == "sum" ? sum_theories(acc, next) : compose_theories(acc, next);
                }
                t = std::move(acc);
            } else if (kind == "scaled") {
                const Entry oe = sec.require("of");
                const Complex c = sec.convert(sec.require("c"), parse_complex);
                t = scale_theory(c, theory(oe.value, sec, oe.line));
            } else {
                sec.fail("unknown theory kind '" + kind + "'", kind_e.line);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            sec.fail(ex.what());
        }
        sec.reject_unknown();
        building.erase(name);
        return cfg.theories.emplace(name, std::move(*t)).first->second;
    };
    for (auto& [name, sec] : th_secs) theory(name, *sec, sec->line);

    const Entry te = task->require("target");
    const Entry ae = task->require("ambient");
    theory(te.value, *task, te.line);
    theory(ae.value, *task, ae.line);
    cfg.target = te.value;
    cfg.ambient = ae.value;
    if (auto s = task->get("strategy")) cfg.strategy = task->convert(*s, strategy_from_string);
    task->reject_unknown();
    if (!(cfg.target_theory().grid() == cfg.ambient_theory().grid())) throw ConfigError("target and ambient grids differ");

    if (run_sec) {
        if (auto e = run_sec->get("samples")) cfg.samples = static_cast<int>(run_sec->convert(*e, parse_integer));
        if (auto e = run_sec->get("seed")) cfg.seed = static_cast<std::uint64_t>(run_sec->convert(*e, parse_integer));
        if (auto e = run_sec->get("tol")) cfg.tol = run_sec->convert(*e, parse_real);
        if (auto e = run_sec->get("map_samples"))
            cfg.map_samples = static_cast<int>(run_sec->convert(*e, parse_integer));
        run_sec->reject_unknown();
    }
    if (cfg.samples < 1) throw ConfigError("samples must be positive");
    if (cfg.map_samples < 1) throw ConfigError("map_samples must be positive");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace emergent::cli
