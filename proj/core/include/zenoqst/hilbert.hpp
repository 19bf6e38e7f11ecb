#pragma once

// Truncated tensor-product Hilbert spaces for N three-level atoms, N cavity
// modes and an optional fiber bus mode.
//
// Canonical ordering of factors: atoms in node order, then cavity modes in
// node order, then the fiber mode last. Basis states are enumerated
// lexicographically over that factor list with the first atom most
// significant and levels ordered g0 < g1 < e.
//
// Excitation number
// -----------------
// excitation(state) = #atoms in g1 or e + total photon number.
//
// Atoms in g1 count, not only atoms in e: the drive exchanges g1 <-> e, the
// cavity coupling exchanges e <-> (g0 + photon) and the fiber coupling moves
// photons between modes, so this is exactly the quantity every Hamiltonian
// term conserves. Every collapse operator lowers it or leaves it unchanged.
// Sector filtering relies on this.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zenoqst {

enum class Level : std::uint8_t { g0 = 0, g1 = 1, e = 2 };

inline constexpr int kLevelCount = 3;

char level_char(Level level);
Level level_from_char(char c);

// Above this dimension basis construction refuses to proceed.
inline constexpr std::size_t kDefaultMaxDimension = 200000;
// Density matrices are stored dense; refuse above this dimension.
inline constexpr std::size_t kMaxDenseDimension = 2000;

struct SystemSpec {
    int atom_count = 2;
    int cavity_count = 2;
    int fiber_count = 1;
    int photon_cutoff = 1;

    // atoms == cavities == nodes, plus one optional fiber bus mode.
    static SystemSpec network(int nodes, int photon_cutoff = 1, bool with_fiber = true);

    int mode_count() const { return cavity_count + fiber_count; }
    // Mode index of the fiber bus; only valid when fiber_count == 1.
    int fiber_mode() const { return cavity_count; }

    // Throws std::invalid_argument when the system layout is malformed.
    void validate() const;

    bool operator==(const SystemSpec&) const = default;
};

// Single-mode fiber validity: n = L * nu / (2 pi C) must not exceed 1.
struct FiberSpec {
    double length_m = 1.0;
    double decay_bandwidth = 1e9;  // rad/s
    double light_speed = 299792458.0;

    double mode_count() const;
    bool single_mode() const { return mode_count() <= 1.0; }
    // Throws ValidityError when the single-mode condition fails.
    void validate() const;
};

struct BasisState {
    std::vector<Level> atoms;
    std::vector<int> photons;

    int excitation() const;

    // "<levels>:<n_0>.<n_1>...", e.g. "01:0.0.0" for |0>_1 |1>_2 |000>.
    std::string label() const;
    static BasisState parse(std::string_view label);

    auto operator<=>(const BasisState&) const = default;
};

class Basis;
using BasisPtr = std::shared_ptr<const Basis>;

class Basis {
public:
    const SystemSpec& spec() const { return spec_; }
    std::size_t dim() const { return states_.size(); }
    const std::vector<BasisState>& states() const { return states_; }
    const BasisState& state(std::size_t i) const { return states_.at(i); }

    std::optional<std::size_t> find(const BasisState& s) const;
    // Throws std::out_of_range when the state is not part of this basis.
    std::size_t index_of(const BasisState& s) const;
    bool contains(const BasisState& s) const { return find(s).has_value(); }

    // Full tensor basis: no parent. Filtered bases keep a pointer to the full
    // basis they came from plus the position of each state in it.
    bool is_full() const { return parent_ == nullptr; }
    const BasisPtr& parent() const { return parent_; }
    std::span<const std::size_t> parent_indices() const { return parent_index_; }

    // Structural equality: same spec and same ordered states.
    bool same_as(const Basis& other) const;

    // The vacuum with every atom in g0.
    BasisState ground_state() const;

private:
    friend BasisPtr build_basis(const SystemSpec&, std::size_t);
    friend BasisPtr filter_basis(const BasisPtr&, int, bool);

    Basis() = default;
    std::uint64_t encode(const BasisState& s) const;
    void build_index();

    SystemSpec spec_;
    std::vector<BasisState> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    BasisPtr parent_;
    std::vector<std::size_t> parent_index_;
};

// Full tensor-product basis in canonical order.
BasisPtr build_basis(const SystemSpec& spec, std::size_t max_dimension = kDefaultMaxDimension);

// States with excitation <= max_excitation, canonical order preserved.
BasisPtr filter_excitation(const BasisPtr& basis, int max_excitation);

// States with excitation == excitation exactly.
BasisPtr excitation_sector(const BasisPtr& basis, int excitation);

// Shared implementation of the two filters above; `exact` selects ==.
BasisPtr filter_basis(const BasisPtr& basis, int bound, bool exact);

}  // namespace zenoqst
