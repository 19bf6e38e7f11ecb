#include "zenoqst/hilbert.hpp"

#include "zenoqst/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zenoqst {

char level_char(Level level) {
    switch (level) {
        case Level::g0: return '0';
        case Level::g1: return '1';
        case Level::e: return 'e';
    }
    return '?';
}

Level level_from_char(char c) {
    switch (c) {
        case '0': return Level::g0;
        case '1': return Level::g1;
        case 'e': return Level::e;
        default: throw std::invalid_argument(std::string("unknown atomic level '") + c + "'");
    }
}

SystemSpec SystemSpec::network(int nodes, int photon_cutoff, bool with_fiber) {
    SystemSpec spec;
    spec.atom_count = nodes;
    spec.cavity_count = nodes;
    spec.fiber_count = with_fiber ? 1 : 0;
    spec.photon_cutoff = photon_cutoff;
    return spec;
}

void SystemSpec::validate() const {
    if (atom_count < 1) throw std::invalid_argument("SystemSpec: atom_count must be >= 1");
    if (cavity_count != atom_count)
        throw std::invalid_argument("SystemSpec: cavity_count must equal atom_count");
    if (fiber_count != 0 && fiber_count != 1)
        throw std::invalid_argument("SystemSpec: fiber_count must be 0 or 1");
    if (photon_cutoff < 0) throw std::invalid_argument("SystemSpec: photon_cutoff must be >= 0");
}

double FiberSpec::mode_count() const {
    return length_m * decay_bandwidth / (2.0 * std::numbers::pi * light_speed);
}

void FiberSpec::validate() const {
    if (!(length_m > 0.0) || !(decay_bandwidth > 0.0) || !(light_speed > 0.0))
        throw std::invalid_argument("FiberSpec: length, bandwidth and light speed must be positive");
    if (!single_mode()) {
        throw ValidityError("fiber mode count L*nu/(2*pi*C) = " + std::to_string(mode_count()) +
                            " exceeds 1; the single-mode fiber model does not apply");
    }
}

int BasisState::excitation() const {
    int n = 0;
    for (Level l : atoms) n += (l == Level::g0) ? 0 : 1;
    for (int p : photons) n += p;
    return n;
}

std::string BasisState::label() const {
    std::string out;
    out.reserve(atoms.size() + 2 * photons.size() + 1);
    for (Level l : atoms) out.push_back(level_char(l));
    out.push_back(':');
    for (std::size_t m = 0; m < photons.size(); ++m) {
        if (m) out.push_back('.');
        out += std::to_string(photons[m]);
    }
    return out;
}

BasisState BasisState::parse(std::string_view label) {
    const auto colon = label.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("basis label '" + std::string(label) + "' lacks ':'");
    BasisState s;
    for (char c : label.substr(0, colon)) s.atoms.push_back(level_from_char(c));
    auto rest = label.substr(colon + 1);
    while (!rest.empty()) {
        const auto dot = rest.find('.');
        const auto token = rest.substr(0, dot);
        int n = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
        if (ec != std::errc{} || ptr != token.data() + token.size() || n < 0)
            throw std::invalid_argument("bad photon number in label '" + std::string(label) + "'");
        s.photons.push_back(n);
        if (dot == std::string_view::npos) break;
        rest = rest.substr(dot + 1);
    }
    return s;
}

std::uint64_t Basis::encode(const BasisState& s) const {
    // Mixed radix, first factor most significant: matches canonical order.
    const auto radix = static_cast<std::uint64_t>(spec_.photon_cutoff + 1);
    std::uint64_t code = 0;
    for (Level l : s.atoms) code = code * kLevelCount + static_cast<std::uint64_t>(l);
    for (int p : s.photons) code = code * radix + static_cast<std::uint64_t>(p);
    return code;
}

void Basis::build_index() {
    index_.clear();
    index_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(encode(states_[i]), i);
}

std::optional<std::size_t> Basis::find(const BasisState& s) const {
    if (s.atoms.size() != static_cast<std::size_t>(spec_.atom_count) ||
        s.photons.size() != static_cast<std::size_t>(spec_.mode_count()))
        return std::nullopt;
    for (int p : s.photons)
        if (p < 0 || p > spec_.photon_cutoff) return std::nullopt;
    const auto it = index_.find(encode(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Basis::index_of(const BasisState& s) const {
    if (auto i = find(s)) return *i;
    throw std::out_of_range("basis state " + s.label() + " is not in this basis");
}

bool Basis::same_as(const Basis& other) const {
    return this == &other || (spec_ == other.spec_ && states_ == other.states_);
}

BasisState Basis::ground_state() const {
    BasisState s;
    s.atoms.assign(static_cast<std::size_t>(spec_.atom_count), Level::g0);
    s.photons.assign(static_cast<std::size_t>(spec_.mode_count()), 0);
    return s;
}

BasisPtr build_basis(const SystemSpec& spec, std::size_t max_dimension) {
    spec.validate();
    const int modes = spec.mode_count();
    double dim_estimate = std::pow(3.0, spec.atom_count) * std::pow(spec.photon_cutoff + 1.0, modes);
    if (dim_estimate > static_cast<double>(max_dimension)) {
        throw std::length_error("basis dimension " + std::to_string(static_cast<long double>(dim_estimate)) +
                                " exceeds the configured cap " + std::to_string(max_dimension));
    }

    std::shared_ptr<Basis> basis(new Basis());
    basis->spec_ = spec;
    const auto dim = static_cast<std::size_t>(dim_estimate);
    basis->states_.reserve(dim);

    // Odometer over the factor list, last factor fastest.
    const std::size_t factors = static_cast<std::size_t>(spec.atom_count + modes);
    std::vector<int> digits(factors, 0);
    std::vector<int> radix(factors);
    for (std::size_t f = 0; f < factors; ++f)
        radix[f] = f < static_cast<std::size_t>(spec.atom_count) ? kLevelCount : spec.photon_cutoff + 1;

    for (std::size_t n = 0; n < dim; ++n) {
        BasisState s;
        s.atoms.reserve(static_cast<std::size_t>(spec.atom_count));
        s.photons.reserve(static_cast<std::size_t>(modes));
        for (std::size_t f = 0; f < factors; ++f) {
            if (f < static_cast<std::size_t>(spec.atom_count))
                s.atoms.push_back(static_cast<Level>(digits[f]));
            else
                s.photons.push_back(digits[f]);
        }
        basis->states_.push_back(std::move(s));
        for (std::size_t f = factors; f-- > 0;) {
            if (++digits[f] < radix[f]) break;
            digits[f] = 0;
        }
    }
    basis->build_index();
    return basis;
}

BasisPtr filter_basis(const BasisPtr& basis, int bound, bool exact) {
    if (!basis) throw std::invalid_argument("filter_excitation: null basis");
    if (bound < 0) throw std::invalid_argument("filter_excitation: bound must be >= 0");

    const BasisPtr& root = basis->is_full() ? basis : basis->parent();
    std::shared_ptr<Basis> out(new Basis());
    out->spec_ = basis->spec();
    out->parent_ = root;
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        const int n = basis->state(i).excitation();
        if (exact ? n == bound : n <= bound) {
            out->states_.push_back(basis->state(i));
            out->parent_index_.push_back(basis->is_full() ? i : basis->parent_indices()[i]);
        }
    }
    out->build_index();
    return out;
}

BasisPtr filter_excitation(const BasisPtr& basis, int max_excitation) {
    return filter_basis(basis, max_excitation, false);
}

BasisPtr excitation_sector(const BasisPtr& basis, int excitation) {
    return filter_basis(basis, excitation, true);
}

}  // namespace zenoqst
