#include "ergopress/tower_io.hpp"

#include <fstream>

namespace ergopress {

Json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

Sft sft_from_json(const Json& j) {
    if (j.contains("full")) {
        if (!j["full"].is_number_integer() || j["full"].get<int>() < 1)
            throw ValidationError("\"full\" must be a positive integer");
        return Sft::full_shift(j["full"].get<int>());
    }
    if (!j.contains("alphabet") || !j["alphabet"].is_array())
        throw ValidationError("shift needs an \"alphabet\" array");
    std::vector<std::string> alphabet;
    for (const auto& s : j["alphabet"]) {
        if (!s.is_string()) throw ValidationError("alphabet symbols must be strings");
        alphabet.push_back(s.get<std::string>());
    }
    std::vector<std::pair<int, int>> transitions;
    if (!j.contains("transitions") || !j["transitions"].is_array())
        throw ValidationError("shift needs a \"transitions\" array");
    for (const auto& e : j["transitions"]) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("transitions must be pairs [i,j]");
        transitions.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Sft(std::move(alphabet), transitions);
}

namespace {

SlidingBlockCode code_from_json(const Json& j, const Sft& source, const Sft& target,
                                const std::string& name) {
    if (!j.contains("rule") || !j["rule"].is_object())
        throw ValidationError(name + " needs a \"rule\" object mapping symbols to symbols");
    std::vector<int> rule(source.size(), -1);
    for (const auto& [key, value] : j["rule"].items()) {
        int src = source.symbol_index(key);
        if (src < 0) continue; // symbol was trimmed away or never existed
        if (!value.is_string())
            throw ValidationError(name + " rule values must be symbol strings");
        int tgt = target.symbol_index(value.get<std::string>());
        if (tgt < 0)
            throw ValidationError(name + " rule maps " + key + " to unknown symbol '" +
                                  value.get<std::string>() + "'");
        rule[src] = tgt;
    }
    for (int a = 0; a < source.size(); ++a)
        if (rule[a] < 0)
            throw ValidationError(name + " rule is missing symbol '" + source.symbol(a) +
                                  "' (rules must be 1-block on the alphabet; fold wider "
                                  "windows with a higher-block recoding first)");
    return SlidingBlockCode(source, target, std::move(rule), name);
}

} // namespace

Tower tower_from_json(const Json& j) {
    for (const char* key : {"x", "y", "z", "pi", "phi"})
        if (!j.contains(key)) throw ValidationError(std::string("tower file is missing \"") + key + "\"");
    Sft x = sft_from_json(j["x"]);
    Sft y = sft_from_json(j["y"]);
    Sft z = sft_from_json(j["z"]);
    SlidingBlockCode pi = code_from_json(j["pi"], x, y, "pi");
    SlidingBlockCode phi = code_from_json(j["phi"], y, z, "phi");
    return Tower(std::move(x), std::move(y), std::move(z), std::move(pi), std::move(phi));
}

Tower load_tower(const std::string& path) { return tower_from_json(parse_file(path)); }

Potential potential_from_json(const Json& j, const Sft& x) {
    if (!j.is_object()) throw ValidationError("potential must be an object of symbol:value");
    std::vector<double> values(x.size(), 0.0);
    for (const auto& [key, value] : j.items()) {
        int idx = x.symbol_index(key);
        if (idx < 0) throw ValidationError("potential names unknown symbol '" + key + "'");
        if (!value.is_number()) throw ValidationError("potential values must be numbers");
        values[idx] = value.get<double>();
    }
    return Potential(std::move(values));
}

Potential load_potential(const std::string& path, const Sft& x) {
    return potential_from_json(parse_file(path), x);
}

MarkovMeasure measure_from_json(const Json& j, const Sft& base) {
    int order = 1;
    if (j.contains("order")) order = j["order"].get<int>();
    if (j.value("maxent", false)) return MarkovMeasure::parry(base, order);
    if (!j.contains("kernel") || !j["kernel"].is_array())
        throw ValidationError("measure needs a \"kernel\" matrix or \"maxent\": true");
    Matrix kernel;
    for (const auto& row : j["kernel"]) {
        kernel.emplace_back();
        for (const auto& v : row) kernel.back().push_back(v.get<double>());
    }
    return MarkovMeasure::from_kernel(base, order, std::move(kernel));
}

OptimizerConfig config_from_json(const Json& j) {
    OptimizerConfig c;
    c.order = j.value("order", c.order);
    c.restarts = j.value("restarts", c.restarts);
    c.seed = j.value("seed", c.seed);
    c.n_entropy = j.value("n_entropy", c.n_entropy);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.tol = j.value("tol", c.tol);
    if (c.order < 1 || c.restarts < 1 || c.n_entropy < 2 || c.max_iters < 1 || c.tol <= 0)
        throw ValidationError("optimizer config out of range");
    return c;
}

OptimizerConfig load_config(const std::string& path) { return config_from_json(parse_file(path)); }

namespace {

Json sft_to_json(const Sft& s) {
    if (s.is_full()) {
        bool canonical = true;
        for (int i = 0; i < s.size(); ++i)
            if (s.symbol(i) != std::to_string(i)) canonical = false;
        if (canonical) return Json{{"full", s.size()}};
    }
    Json j;
    j["alphabet"] = s.alphabet();
    Json trans = Json::array();
    for (int a = 0; a < s.size(); ++a)
        for (int b : s.successors(a)) trans.push_back(Json::array({a, b}));
    j["transitions"] = std::move(trans);
    return j;
}

Json rule_to_json(const SlidingBlockCode& code) {
    Json rule;
    for (int a = 0; a < code.source().size(); ++a)
        rule[code.source().symbol(a)] = code.target().symbol(code.apply(a));
    return Json{{"rule", std::move(rule)}};
}

} // namespace

Json tower_to_json(const Tower& t, const Potential& f) {
    Json j;
    j["x"] = sft_to_json(t.x);
    j["y"] = sft_to_json(t.y);
    j["z"] = sft_to_json(t.z);
    j["pi"] = rule_to_json(t.pi);
    j["phi"] = rule_to_json(t.phi);
    Json pot;
    for (int a = 0; a < t.x.size(); ++a) pot[t.x.symbol(a)] = f.values[a];
    j["potential"] = std::move(pot);
    return j;
}

} // namespace ergopress
