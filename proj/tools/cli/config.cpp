// Copyright 2026 The feynroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace feynroute::cli {

ConfigError::ConfigError(std::string source, std::size_t line, const std::string &message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      source_(std::move(source)),
      line_(line) {
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | postfix
//   postfix := primary ['i']
//   primary := number | 'i' | '(' expr ')' | 'sqrt' '(' expr ')'
class ScalarParser {
   public:
    explicit ScalarParser(std::string_view text) : s_(text) {
    }

    Complex parse() {
        Complex v = expr();
        skip_space();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return v;
    }

   private:
    [[noreturn]] void fail(const std::string &why) const {
        throw std::invalid_argument("cannot read number '" + std::string(s_) + "': " + why);
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view w) {
        skip_space();
        if (s_.substr(pos_, w.size()) == w) {
            std::size_t end = pos_ + w.size();
            if (end == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]))) {
                pos_ = end;
                return true;
            }
        }
        return false;
    }

    Complex expr() {
        Complex v = term();
        while (true) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    Complex term() {
        Complex v = unary();
        while (true) {
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                Complex d = unary();
                if (d == Complex(0.0)) {
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    Complex unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        Complex v = primary();
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            v *= Complex(0.0, 1.0);
        }
        return v;
    }

    Complex primary() {
        skip_space();
        if (pos_ >= s_.size()) {
            fail("unexpected end");
        }
        if (accept('(')) {
            Complex v = expr();
            if (!accept(')')) {
                fail("missing ')'");
            }
            return v;
        }
        if (accept_word("sqrt")) {
            if (!accept('(')) {
                fail("expected '(' after sqrt");
            }
            Complex v = expr();
            if (!accept(')')) {
                fail("missing ')'");
            }
            if (v.imag() == 0.0 && v.real() >= 0.0) {
                return std::sqrt(v.real());
            }
            return std::sqrt(v);
        }
        if (accept_word("i")) {
            return {0.0, 1.0};
        }
        double value = 0.0;
        const char *begin = s_.data() + pos_;
        auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), value);
        if (ec != std::errc() || end == begin) {
            fail("expected a number");
        }
        pos_ += static_cast<std::size_t>(end - begin);
        return value;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

/// Splits on commas outside parentheses.
std::vector<std::string_view> split_list(std::string_view s, char sep = ',') {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '(') {
            ++depth;
        } else if (s[k] == ')') {
            --depth;
        } else if (s[k] == sep && depth == 0) {
            out.push_back(trim(s.substr(start, k - start)));
            start = k + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) {
            ++k;
        }
        std::size_t start = k;
        while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) {
            ++k;
        }
        if (k > start) {
            out.push_back(s.substr(start, k - start));
        }
    }
    return out;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '[' || c == ']' ||
               c == '.';
    });
}

class Reader {
   public:
    Reader(std::string source) : source_(std::move(source)) {
    }

    [[noreturn]] void fail(std::size_t line, const std::string &message) const {
        throw ConfigError(source_, line, message);
    }

    std::vector<Complex> complex_list(std::string_view text, std::size_t line) const {
        std::vector<Complex> out;
        for (auto item : split_list(text)) {
            if (item.empty()) {
                fail(line, "empty entry in list");
            }
            try {
                out.push_back(parse_complex(item));
            } catch (const std::invalid_argument &e) {
                fail(line, e.what());
            }
        }
        return out;
    }

    std::vector<double> real_list(std::string_view text, std::size_t line) const {
        std::vector<double> out;
        for (auto item : split_list(text)) {
            if (item.empty()) {
                fail(line, "empty entry in list");
            }
            try {
                out.push_back(parse_real(item));
            } catch (const std::invalid_argument &e) {
                fail(line, e.what());
            }
        }
        return out;
    }

    double real(std::string_view text, std::size_t line) const {
        try {
            return parse_real(text);
        } catch (const std::invalid_argument &e) {
            fail(line, e.what());
        }
    }

   private:
    std::string source_;
};

struct KeyValue {
    std::string_view key;
    std::string_view value;
};

std::optional<KeyValue> split_assignment(std::string_view line) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        return std::nullopt;
    }
    return KeyValue{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

Complex parse_complex(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw std::invalid_argument("empty number");
    }
    Complex v = ScalarParser(text).parse();
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument("number '" + std::string(text) + "' is not finite");
    }
    return v;
}

double parse_real(std::string_view text) {
    Complex v = parse_complex(text);
    if (v.imag() != 0.0) {
        throw std::invalid_argument("expected a real number, got '" + std::string(trim(text)) + "'");
    }
    return v.real();
}

const ProjectorFamily &ScenarioConfig::family(const std::string &name) const {
    for (const auto &f : families) {
        if (f.name == name) {
            return f.family;
        }
    }
    throw std::out_of_range("no family " + name);
}

const Operator &ScenarioConfig::unitary(const std::string &name) const {
    for (const auto &u : unitaries) {
        if (u.name == name) {
            return u.matrix;
        }
    }
    throw std::out_of_range("no unitary " + name);
}

ScenarioConfig parse_scenario(std::string_view text, const std::string &source) {
    Reader r(source);
    ScenarioConfig cfg;

    struct RawVector {
        std::string name;
        std::vector<Complex> coeffs;
        std::size_t line;
    };
    struct RawLabels {
        std::string name;
        std::vector<double> labels;
        std::size_t line;
    };
    struct RawMatrix {
        std::string name;
        std::vector<std::vector<Complex>> rows;
        std::size_t line;
    };
    std::optional<RawVector> initial;
    std::vector<RawVector> finals;
    std::vector<RawLabels> families;
    std::vector<RawMatrix> unitaries;
    std::optional<std::pair<std::string, std::size_t>> postselect;
    std::optional<std::size_t> dim_line;
    std::size_t deltan_line = 0;
    std::size_t variables_line = 0;
    std::set<std::string> seen_keys;
    std::set<std::string> seen_sections;

    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                r.fail(line_no, "unterminated section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::set<std::string> known = {"scenario", "states",   "families",   "contexts",
                                                        "unitaries", "deltan", "constraints"};
            if (!known.count(section)) {
                r.fail(line_no, "unknown section [" + section + "]");
            }
            if (!seen_sections.insert(section).second) {
                r.fail(line_no, "section [" + section + "] appears twice");
            }
            continue;
        }
        if (section.empty()) {
            r.fail(line_no, "content before the first section header");
        }

        auto unique_key = [&](const std::string &key) {
            if (!seen_keys.insert(section + "." + key).second) {
                r.fail(line_no, "duplicate entry '" + key + "' in [" + section + "]");
            }
        };

        if (section == "contexts") {
            auto words = split_words(line);
            ContextSpec c;
            c.line = line_no;
            if (words.size() == 1 && words[0] == "none") {
                c.kind = ContextSpec::Kind::none;
                c.name = "none";
            } else if (words.size() == 1 && is_identifier(words[0])) {
                c.kind = ContextSpec::Kind::family;
                c.name = c.first = std::string(words[0]);
            } else if (words.size() == 3 && words[0] == "product") {
                c.kind = ContextSpec::Kind::product;
                c.first = std::string(words[1]);
                c.second = std::string(words[2]);
                c.name = c.first + "*" + c.second;
            } else {
                r.fail(line_no, "expected 'none', a family name, or 'product A B'");
            }
            unique_key(c.name);
            cfg.contexts.push_back(std::move(c));
            continue;
        }

        if (section == "constraints") {
            auto colon = line.find(':');
            auto kv = split_assignment(line);
            if (colon != std::string_view::npos && (!kv || colon < line.find('='))) {
                std::string tag(trim(line.substr(0, colon)));
                auto body = split_assignment(line.substr(colon + 1));
                if (!is_identifier(tag)) {
                    r.fail(line_no, "constraint tag '" + tag + "' is not a valid name");
                }
                if (!body) {
                    r.fail(line_no, "constraint " + tag + " needs 'coefficients = value'");
                }
                unique_key("constraint " + tag);
                cfg.constraints.push_back({tag, r.real_list(body->key, line_no), r.real(body->value, line_no), line_no});
                continue;
            }
            if (!kv) {
                r.fail(line_no, "expected 'variables = ...', 'bounds VAR = lo, hi' or 'TAG: coefficients = value'");
            }
            auto words = split_words(kv->key);
            if (words.size() == 1 && words[0] == "variables") {
                unique_key("variables");
                variables_line = line_no;
                for (auto v : split_list(kv->value)) {
                    if (!is_identifier(v)) {
                        r.fail(line_no, "variable name '" + std::string(v) + "' is not valid");
                    }
                    cfg.variables.emplace_back(v);
                }
            } else if (words.size() == 2 && words[0] == "bounds") {
                unique_key("bounds " + std::string(words[1]));
                auto lim = r.real_list(kv->value, line_no);
                if (lim.size() != 2) {
                    r.fail(line_no, "bounds need two values 'lower, upper'");
                }
                cfg.bounds.push_back({std::string(words[1]), lim[0], lim[1], line_no});
            } else {
                r.fail(line_no, "unknown entry '" + std::string(kv->key) + "' in [constraints]");
            }
            continue;
        }

        auto kv = split_assignment(line);
        if (!kv || kv->key.empty()) {
            r.fail(line_no, "expected 'key = value'");
        }
        const std::string key(kv->key);
        const std::string_view value = kv->value;
        if (value.empty()) {
            r.fail(line_no, "missing value for '" + key + "'");
        }

        if (section == "scenario") {
            unique_key(key);
            if (key == "name") {
                cfg.name = std::string(value);
            } else if (key == "dim") {
                int d = 0;
                auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
                if (ec != std::errc() || end != value.data() + value.size() || d < 1 || d > 16) {
                    r.fail(line_no, "dim must be an integer between 1 and 16");
                }
                cfg.dim = static_cast<std::size_t>(d);
                dim_line = line_no;
            } else if (key == "postselect") {
                postselect = {std::string(value), line_no};
            } else {
                r.fail(line_no, "unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "states") {
            auto words = split_words(kv->key);
            if (words.size() == 1 && words[0] == "initial") {
                unique_key("initial");
                initial = RawVector{"initial", r.complex_list(value, line_no), line_no};
            } else if (words.size() == 2 && words[0] == "final" && is_identifier(words[1])) {
                unique_key("final " + std::string(words[1]));
                finals.push_back({std::string(words[1]), r.complex_list(value, line_no), line_no});
            } else {
                r.fail(line_no, "expected 'initial = ...' or 'final NAME = ...'");
            }
        } else if (section == "families") {
            if (!is_identifier(key) || key == "none" || key == "product") {
                r.fail(line_no, "'" + key + "' cannot name a family");
            }
            unique_key(key);
            families.push_back({key, r.real_list(value, line_no), line_no});
        } else if (section == "unitaries") {
            if (!is_identifier(key)) {
                r.fail(line_no, "'" + key + "' cannot name a unitary");
            }
            unique_key(key);
            RawMatrix m{key, {}, line_no};
            for (auto row : split_list(value, ';')) {
                m.rows.push_back(r.complex_list(row, line_no));
            }
            unitaries.push_back(std::move(m));
        } else if (section == "deltan") {
            unique_key(key);
            if (key != "unitary") {
                r.fail(line_no, "unknown key '" + key + "' in [deltan]");
            }
            cfg.deltan = std::string(value);
            deltan_line = line_no;
        }
    }

    // Validation, in file order where possible.
    if (!dim_line) {
        r.fail(0, "[scenario] must set dim");
    }
    if (cfg.name.empty()) {
        cfg.name = "scenario";
    }
    const std::size_t dim = cfg.dim;
    auto require_dim = [&](std::size_t got, std::size_t line, const std::string &what) {
        if (got != dim) {
            r.fail(line, what + " has " + std::to_string(got) + " entries, expected dim = " + std::to_string(dim));
        }
    };

    if (!initial) {
        r.fail(0, "[states] must set initial");
    }
    require_dim(initial->coeffs.size(), initial->line, "initial state");
    try {
        cfg.initial = State::from_coeffs(initial->coeffs);
    } catch (const NormalizationError &) {
        r.fail(initial->line, "initial state cannot be normalized");
    }

    if (finals.empty()) {
        r.fail(0, "[states] must declare at least one final state");
    }
    for (const auto &f : finals) {
        require_dim(f.coeffs.size(), f.line, "final " + f.name);
        try {
            cfg.finals.push_back({f.name, State::from_coeffs(f.coeffs), f.line});
        } catch (const NormalizationError &) {
            r.fail(f.line, "final " + f.name + " cannot be normalized");
        }
    }
    std::vector<State> final_states;
    for (const auto &f : cfg.finals) {
        final_states.push_back(f.state);
    }
    if (auto bad = find_orthonormality_violation(final_states)) {
        r.fail(cfg.finals[bad->second].line, "finals " + cfg.finals[bad->first].name + " and " +
                                                 cfg.finals[bad->second].name + " are not orthonormal");
    }

    if (postselect) {
        auto it = std::find_if(cfg.finals.begin(), cfg.finals.end(),
                               [&](const NamedState &s) { return s.name == postselect->first; });
        if (it == cfg.finals.end()) {
            r.fail(postselect->second, "postselect names unknown final '" + postselect->first + "'");
        }
        cfg.postselect = static_cast<std::size_t>(it - cfg.finals.begin());
    }

    for (const auto &f : families) {
        require_dim(f.labels.size(), f.line, "family " + f.name);
        cfg.families.push_back({f.name, ProjectorFamily::from_labels(f.labels), f.line});
    }

    auto has_family = [&](const std::string &name) {
        return std::any_of(cfg.families.begin(), cfg.families.end(),
                           [&](const NamedFamily &f) { return f.name == name; });
    };
    for (const auto &c : cfg.contexts) {
        for (const std::string *name : {&c.first, &c.second}) {
            if (!name->empty() && !has_family(*name)) {
                r.fail(c.line, "context refers to unknown family '" + *name + "'");
            }
        }
    }
    if (!cfg.contexts.empty() && cfg.finals.size() != dim) {
        r.fail(cfg.contexts.front().line, "route tables need a complete basis of " + std::to_string(dim) +
                                              " finals, got " + std::to_string(cfg.finals.size()));
    }

    for (const auto &u : unitaries) {
        if (u.rows.size() != dim) {
            r.fail(u.line, "unitary " + u.name + " has " + std::to_string(u.rows.size()) + " rows, expected " +
                               std::to_string(dim));
        }
        ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t row = 0; row < dim; ++row) {
            require_dim(u.rows[row].size(), u.line, "row " + std::to_string(row + 1) + " of unitary " + u.name);
            for (std::size_t col = 0; col < dim; ++col) {
                m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = u.rows[row][col];
            }
        }
        Operator op = Operator::from_matrix(m);
        if (!op.is_unitary()) {
            r.fail(u.line, "matrix " + u.name + " is not unitary within 1e-10");
        }
        cfg.unitaries.push_back({u.name, std::move(op), u.line});
    }

    if (cfg.deltan) {
        if (dim != 2) {
            r.fail(deltan_line, "the jump measurement needs dim = 2");
        }
        auto it = std::find_if(cfg.unitaries.begin(), cfg.unitaries.end(),
                               [&](const NamedUnitary &u) { return u.name == *cfg.deltan; });
        if (it == cfg.unitaries.end()) {
            r.fail(deltan_line, "unknown unitary '" + *cfg.deltan + "'");
        }
    }

    if (!cfg.constraints.empty() && cfg.variables.empty()) {
        r.fail(cfg.constraints.front().line, "constraints need a 'variables = ...' line");
    }
    for (const auto &c : cfg.constraints) {
        if (c.coeffs.size() != cfg.variables.size()) {
            r.fail(c.line, "constraint " + c.tag + " has " + std::to_string(c.coeffs.size()) +
                               " coefficients for " + std::to_string(cfg.variables.size()) + " variables");
        }
    }
    for (const auto &b : cfg.bounds) {
        if (std::find(cfg.variables.begin(), cfg.variables.end(), b.variable) == cfg.variables.end()) {
            r.fail(b.line, "bounds for unknown variable '" + b.variable + "'");
        }
        if (b.upper < b.lower) {
            r.fail(b.line, "bounds for " + b.variable + " are inverted");
        }
    }
    if (cfg.variables.size() > 32) {
        r.fail(variables_line, "at most 32 variables are supported");
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path, 0, "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace feynroute::cli
