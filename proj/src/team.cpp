#include "teamlog/team.hpp"

#include "teamlog/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace teamlog {

Team::Team(std::vector<Var> domain) : domain_(std::move(domain)) { check_domain(); }

Team::Team(std::vector<Var> domain, std::vector<Assignment> rows)
    : domain_(std::move(domain)), rows_(std::move(rows)) {
    check_domain();
    for (const auto& row : rows_) {
        if (row.size() != domain_.size()) {
            throw TeamError("row has " + std::to_string(row.size()) + " values but the domain has " +
                            std::to_string(domain_.size()) + " variables");
        }
        for (auto bit : row) {
            if (bit > 1) throw TeamError("assignment value " + std::to_string(bit) + " is not a bit");
        }
    }
    std::sort(rows_.begin(), rows_.end());
    if (std::adjacent_find(rows_.begin(), rows_.end()) != rows_.end()) {
        throw TeamError("duplicate assignment in team");
    }
}

Team::Team(std::vector<Var> domain, const std::set<Assignment>& rows)
    : Team(std::move(domain), std::vector<Assignment>(rows.begin(), rows.end())) {}

void Team::check_domain() const {
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        for (std::size_t j = i + 1; j < domain_.size(); ++j) {
            if (domain_[i] == domain_[j]) {
                throw TeamError("variable '" + domain_[i].name() + "' listed twice in team domain");
            }
        }
    }
}

std::optional<std::size_t> Team::index_of(const Var& v) const {
    auto it = std::find(domain_.begin(), domain_.end(), v);
    if (it == domain_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - domain_.begin());
}

std::size_t Team::require_index(const Var& v) const {
    auto i = index_of(v);
    if (!i) throw UnknownVariable(v.name());
    return *i;
}

std::vector<std::size_t> Team::indices(const VarTuple& vars) const {
    std::vector<std::size_t> out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(require_index(v));
    return out;
}

Team Team::subteam(std::uint64_t mask) const {
    Team out;
    out.domain_ = domain_;
    for (std::size_t i = 0; i < rows_.size() && i < 64; ++i) {
        if (mask >> i & 1U) out.rows_.push_back(rows_[i]);
    }
    return out;
}

bool Team::contains(const Assignment& row) const {
    return std::binary_search(rows_.begin(), rows_.end(), row);
}

namespace {

Team parse_team_text(std::string_view text) {
    std::vector<Var> domain;
    std::vector<Assignment> rows;
    std::set<Assignment> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            have_header = true;
            std::istringstream words(line);
            std::string w;
            while (words >> w) {
                if (!is_identifier(w)) {
                    throw ParseError(ParseError::Kind::Syntax, lineno, 1, "invalid variable name '" + w + "'");
                }
                Var v(w);
                if (std::find(domain.begin(), domain.end(), v) != domain.end()) {
                    throw ParseError(ParseError::Kind::Syntax, lineno, 1, "variable '" + w + "' listed twice");
                }
                domain.push_back(std::move(v));
            }
            continue;
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t");
        std::string_view bits(line.data() + first, last - first + 1);
        if (bits.size() != domain.size()) {
            throw ParseError(ParseError::Kind::RowArity, lineno, first + 1,
                             "row has " + std::to_string(bits.size()) + " values but the header names " +
                                 std::to_string(domain.size()) + " variables");
        }
        Assignment row;
        row.reserve(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1') {
                throw ParseError(ParseError::Kind::NonBit, lineno, first + i + 1,
                                 "'" + std::string(1, bits[i]) + "' is not 0 or 1");
            }
            row.push_back(static_cast<std::uint8_t>(bits[i] - '0'));
        }
        if (!seen.insert(row).second) {
            throw ParseError(ParseError::Kind::DuplicateRow, lineno, first + 1,
                             "duplicate row '" + std::string(bits) + "'");
        }
        rows.push_back(std::move(row));
    }
    return Team(std::move(domain), std::move(rows));
}

}  // namespace

Team parse_team_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vars") || !doc.contains("rows") || !doc["vars"].is_array() ||
        !doc["rows"].is_array()) {
        throw ParseError(ParseError::Kind::Syntax, 1, 1, "team object needs array fields \"vars\" and \"rows\"");
    }
    std::vector<Var> domain;
    for (const auto& v : doc["vars"]) {
        if (!v.is_string() || !is_identifier(v.get<std::string>())) {
            throw ParseError(ParseError::Kind::Syntax, 1, 1, "invalid variable name " + v.dump());
        }
        domain.emplace_back(v.get<std::string>());
    }
    std::vector<Assignment> rows;
    std::set<Assignment> seen;
    std::size_t index = 0;
    for (const auto& r : doc["rows"]) {
        ++index;
        if (!r.is_array() || r.size() != domain.size()) {
            throw ParseError(ParseError::Kind::RowArity, index, 1,
                             "row " + std::to_string(index) + " does not match the " +
                                 std::to_string(domain.size()) + " declared variables");
        }
        Assignment row;
        for (const auto& b : r) {
            if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1)) {
                throw ParseError(ParseError::Kind::NonBit, index, 1, b.dump() + " is not 0 or 1");
            }
            row.push_back(static_cast<std::uint8_t>(b.get<int>()));
        }
        if (!seen.insert(row).second) {
            throw ParseError(ParseError::Kind::DuplicateRow, index, 1, "duplicate row " + r.dump());
        }
        rows.push_back(std::move(row));
    }
    try {
        return Team(std::move(domain), std::move(rows));
    } catch (const TeamError& e) {
        throw ParseError(ParseError::Kind::Syntax, 1, 1, e.what());
    }
}

Team parse_team(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(ParseError::Kind::Syntax, 1, 1, e.what());
        }
        return parse_team_json(doc);
    }
    return parse_team_text(text);
}

std::string render_team(const Team& team) {
    std::string out;
    for (std::size_t i = 0; i < team.domain().size(); ++i) {
        if (i) out += ' ';
        out += team.domain()[i].name();
    }
    out += '\n';
    for (const auto& row : team.rows()) {
        for (auto bit : row) out += static_cast<char>('0' + bit);
        out += '\n';
    }
    return out;
}

nlohmann::json team_to_json(const Team& team) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : team.domain()) vars.push_back(v.name());
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : team.rows()) {
        nlohmann::json r = nlohmann::json::array();
        for (auto bit : row) r.push_back(static_cast<int>(bit));
        rows.push_back(std::move(r));
    }
    return {{"vars", std::move(vars)}, {"rows", std::move(rows)}};
}

}  // namespace teamlog
