#pragma once

// Flat sectioned key-value text:
//
//   # comment            (also ';')
//   [section]
//   key = value          # trailing comments allowed after whitespace
//
// Keys are unique per section. Every lookup marks its key as used so callers
// can reject unknown keys with the line they came from.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zenoqst::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& field, const std::string& message);

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

class IniDocument {
public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        std::size_t line = 0;
    };

    static IniDocument parse(std::string_view text, std::string source);

    const std::string& source() const { return source_; }
    const std::vector<Entry>& entries() const { return entries_; }
    bool has_section(std::string_view section) const;
    const Entry* find(std::string_view section, std::string_view key) const;

    std::optional<std::string> get_string(std::string_view section, std::string_view key) const;
    std::optional<double> get_double(std::string_view section, std::string_view key) const;
    std::optional<int> get_int(std::string_view section, std::string_view key) const;
    std::optional<bool> get_bool(std::string_view section, std::string_view key) const;
    // Comma-separated numbers.
    std::optional<std::vector<double>> get_doubles(std::string_view section, std::string_view key) const;

    // Throws ConfigError naming the first key no getter asked for.
    void reject_unused() const;

    [[noreturn]] void fail(const Entry& entry, const std::string& message) const;

private:
    std::string source_;
    std::vector<Entry> entries_;
    mutable std::vector<bool> used_;
};

// Parses a double, accepting an optional "2pi*" prefix ("2pi*750").
std::optional<double> parse_number(std::string_view text);

}  // namespace zenoqst::cli
