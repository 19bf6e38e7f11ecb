#include "zenoqst/cli/ini.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numbers>
#include <sstream>

namespace zenoqst::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '#' || s[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))))
            return s.substr(0, i);
    }
    return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& field,
                         const std::string& message)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) +
                         (field.empty() ? "" : ": " + field) + ": " + message),
      line_(line),
      field_(field) {}

IniDocument IniDocument::parse(std::string_view text, std::string source) {
    IniDocument doc;
    doc.source_ = std::move(source);
    std::string section;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(doc.source_, lineno, "", "malformed section header '" + std::string(line) + "'");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(doc.source_, lineno, "", "expected 'key = value', got '" + std::string(line) + "'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(doc.source_, lineno, "", "empty key");
        if (section.empty()) throw ConfigError(doc.source_, lineno, key, "key outside of any [section]");
        if (doc.find(section, key))
            throw ConfigError(doc.source_, lineno, section + "." + key, "duplicate key");
        doc.entries_.push_back({section, std::move(key), std::move(value), lineno});
        if (end == text.size()) break;
    }
    doc.used_.assign(doc.entries_.size(), false);
    return doc;
}

bool IniDocument::has_section(std::string_view section) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.section == section; });
}

const IniDocument::Entry* IniDocument::find(std::string_view section, std::string_view key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].section == section && entries_[i].key == key) {
            if (i < used_.size()) used_[i] = true;
            return &entries_[i];
        }
    }
    return nullptr;
}

void IniDocument::fail(const Entry& entry, const std::string& message) const {
    throw ConfigError(source_, entry.line, entry.section + "." + entry.key, message);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    double scale = 1.0;
    if (text.rfind("2pi*", 0) == 0) {
        scale = 2.0 * std::numbers::pi;
        text.remove_prefix(4);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return scale * v;
}

std::optional<std::string> IniDocument::get_string(std::string_view section, std::string_view key) const {
    if (const Entry* e = find(section, key)) return e->value;
    return std::nullopt;
}

std::optional<double> IniDocument::get_double(std::string_view section, std::string_view key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (auto v = parse_number(e->value)) return v;
    fail(*e, "expected a number, got '" + e->value + "'");
}

std::optional<int> IniDocument::get_int(std::string_view section, std::string_view key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc{} || ptr != e->value.data() + e->value.size() || e->value.empty())
        fail(*e, "expected an integer, got '" + e->value + "'");
    return v;
}

std::optional<bool> IniDocument::get_bool(std::string_view section, std::string_view key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes" || e->value == "on") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no" || e->value == "off") return false;
    fail(*e, "expected true/false, got '" + e->value + "'");
}

std::optional<std::vector<double>> IniDocument::get_doubles(std::string_view section, std::string_view key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(e->value);
    for (std::string item; std::getline(ss, item, ',');) {
        auto v = parse_number(item);
        if (!v) fail(*e, "expected comma-separated numbers, got '" + e->value + "'");
        out.push_back(*v);
    }
    return out;
}

void IniDocument::reject_unused() const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!used_[i]) fail(entries_[i], "unknown key");
}

}  // namespace zenoqst::cli
