#include "zenoqst/protocol.hpp"

#include "zenoqst/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zenoqst {

void Qubit::validate(double tol) const {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > tol)
        throw std::invalid_argument("qubit amplitudes must satisfy |a|^2 + |b|^2 = 1");
}

AtomStateSpec& AtomStateSpec::set(int node, Qubit q) {
    q.validate();
    atoms[node] = q;
    return *this;
}

Qubit AtomStateSpec::at(int node) const {
    const auto it = atoms.find(node);
    return it == atoms.end() ? Qubit::ground() : it->second;
}

void AtomStateSpec::validate() const {
    for (const auto& [node, q] : atoms) {
        if (node < 0) throw std::invalid_argument("AtomStateSpec: negative node index");
        q.validate();
    }
}

double PulseSegment::zeno_ratio() const {
    return std::abs(omega) / std::min(std::abs(g), std::abs(lambda));
}

std::vector<int> PulseSchedule::participants() const {
    std::set<int> nodes;
    for (const auto& s : segments) {
        nodes.insert(s.receiver);
        nodes.insert(s.sender);
    }
    return {nodes.begin(), nodes.end()};
}

double PulseSchedule::total_duration() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.duration;
    return total;
}

double PulseSchedule::max_zeno_ratio() const {
    double worst = 0.0;
    for (const auto& s : segments) worst = std::max(worst, s.zeno_ratio());
    return worst;
}

void PulseSchedule::validate() const {
    if (node_count < 2) throw std::invalid_argument("PulseSchedule: need at least two nodes");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (s.receiver == s.sender) throw std::invalid_argument("PulseSchedule: receiver equals sender");
        if (s.receiver < 0 || s.sender < 0 || s.receiver >= node_count || s.sender >= node_count)
            throw std::invalid_argument("PulseSchedule: segment node out of range");
        if (!(s.duration > 0.0)) throw std::invalid_argument("PulseSchedule: segment duration must be > 0");
        if (i > 0) {
            const auto& p = segments[i - 1];
            const int shared = (s.receiver == p.receiver || s.receiver == p.sender) +
                               (s.sender == p.receiver || s.sender == p.sender);
            if (shared > 1) throw std::invalid_argument("PulseSchedule: consecutive segments share both nodes");
        }
    }
}

PulseSegment transfer_segment(int sender, int receiver, double omega, double g, double lambda) {
    if (sender == receiver) throw std::invalid_argument("transfer: sender and receiver must differ");
    if (!(omega > 0.0) || !(g > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("transfer: Omega, g and lambda must be > 0");
    PulseSegment s;
    s.receiver = receiver;
    s.sender = sender;
    s.omega = omega;
    s.g = g;
    s.lambda = lambda;
    s.duration = transfer_time(omega, g, lambda);
    return s;
}

PulseSchedule qst_schedule(int sender, int receiver, double omega, double g, double lambda, int node_count) {
    if (sender < 0 || receiver < 0) throw std::invalid_argument("qst_schedule: negative node index");
    PulseSchedule sched;
    sched.node_count = node_count > 0 ? node_count : std::max(sender, receiver) + 1;
    sched.segments.push_back(transfer_segment(sender, receiver, omega, g, lambda));
    sched.validate();
    return sched;
}

PulseSchedule network_swap_schedule(int i, int j, int helper, int node_count, double omega, double g, double lambda) {
    if (i == j || i == helper || j == helper)
        throw std::invalid_argument("swap: the two atoms and the helper must be distinct");
    for (int n : {i, j, helper})
        if (n < 0 || n >= node_count) throw std::invalid_argument("swap: node " + std::to_string(n) + " out of range");
    PulseSchedule sched;
    sched.node_count = node_count;
    sched.segments = {transfer_segment(i, helper, omega, g, lambda), transfer_segment(j, i, omega, g, lambda),
                      transfer_segment(helper, j, omega, g, lambda)};
    sched.validate();
    return sched;
}

PulseSchedule qss_schedule(int atom_a, int atom_b, int helper, double omega, double g, double lambda) {
    const int nodes = std::max({atom_a, atom_b, helper}) + 1;
    return network_swap_schedule(atom_a, atom_b, helper, nodes, omega, g, lambda);
}

namespace {

std::string node_set(const std::set<int>& nodes) {
    std::string out = "{";
    bool first = true;
    for (int n : nodes) {
        if (!first) out += ',';
        out += std::to_string(n);
        first = false;
    }
    return out + "}";
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> switch_sequence(const PulseSchedule& schedule) {
    std::vector<std::string> out;
    std::set<int> on;
    for (const auto& s : schedule.segments) {
        const std::set<int> pair{s.receiver, s.sender};
        std::set<int> to_off, to_on;
        std::set_difference(on.begin(), on.end(), pair.begin(), pair.end(), std::inserter(to_off, to_off.end()));
        std::set_difference(pair.begin(), pair.end(), on.begin(), on.end(), std::inserter(to_on, to_on.end()));
        if (!to_off.empty()) out.push_back("off " + node_set(to_off));
        if (!to_on.empty()) out.push_back("on " + node_set(to_on));
        out.push_back("transfer " + std::to_string(s.sender) + "->" + std::to_string(s.receiver));
        on = pair;
    }
    if (!on.empty()) out.push_back("off " + node_set(on));
    return out;
}

void write_schedule(std::ostream& os, const PulseSchedule& schedule) {
    os << "# zenoqst schedule v1\n# switches:";
    const auto seq = switch_sequence(schedule);
    for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? " | " : " ") << seq[i];
    os << "\nnodes," << schedule.node_count << '\n';
    os << "index,receiver,sender,omega_receiver,omega_sender,g,lambda,duration\n";
    for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
        const auto& s = schedule.segments[i];
        os << i << ',' << s.receiver << ',' << s.sender << ',' << fmt17(s.omega) << ',' << fmt17(-s.omega) << ','
           << fmt17(s.g) << ',' << fmt17(s.lambda) << ',' << fmt17(s.duration) << '\n';
    }
}

PulseSchedule read_schedule(std::istream& is) {
    PulseSchedule sched;
    sched.node_count = 0;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("schedule line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.rfind("index,", 0) == 0) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        try {
            if (fields.size() == 2 && fields[0] == "nodes") {
                sched.node_count = std::stoi(fields[1]);
                continue;
            }
            if (fields.size() != 8) fail("expected 8 fields");
            if (std::stoul(fields[0]) != sched.segments.size()) fail("segment indices must be consecutive");
            PulseSegment s;
            s.receiver = std::stoi(fields[1]);
            s.sender = std::stoi(fields[2]);
            s.omega = std::stod(fields[3]);
            if (std::stod(fields[4]) != -s.omega) fail("sender Rabi frequency must be -omega_receiver");
            s.g = std::stod(fields[5]);
            s.lambda = std::stod(fields[6]);
            s.duration = std::stod(fields[7]);
            sched.segments.push_back(s);
        } catch (const std::logic_error&) {
            fail("malformed number in '" + line + "'");
        }
    }
    sched.validate();
    return sched;
}

int RunResult::local_index(int node) const {
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    if (it == nodes.end()) throw std::out_of_range("node " + std::to_string(node) + " was not simulated");
    return static_cast<int>(it - nodes.begin());
}

Eigen::Matrix3cd reduced_atom_state(const DensityMatrix& rho, int atom) {
    const Basis& basis = *rho.basis();
    if (atom < 0 || atom >= basis.spec().atom_count) throw std::out_of_range("reduced_atom_state: atom out of range");
    const auto k = static_cast<std::size_t>(atom);
    // Group basis indices by the configuration of everything except `atom`.
    std::map<BasisState, std::vector<std::pair<int, Eigen::Index>>> groups;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        BasisState rest = basis.state(i);
        const int level = static_cast<int>(rest.atoms[k]);
        rest.atoms[k] = Level::g0;
        groups[rest].emplace_back(level, static_cast<Eigen::Index>(i));
    }
    Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
    const DenseMatrix& m = rho.matrix();
    for (const auto& [rest, members] : groups)
        for (const auto& [li, i] : members)
            for (const auto& [lj, j] : members) out(li, lj) += m(i, j);
    return out;
}

Eigen::Matrix3cd RunResult::reduced_atom_state(int node) const {
    return zenoqst::reduced_atom_state(final_state, local_index(node));
}

double RunResult::atom_fidelity(int node, const Qubit& target) const {
    const Eigen::Matrix3cd r = reduced_atom_state(node);
    const Eigen::Vector3cd v(target.a, target.b, 0.0);
    return v.dot(r * v).real();
}

double RunResult::relative_phase(int node, const Qubit& target) const {
    const Eigen::Matrix3cd r = reduced_atom_state(node);
    const cplx coherence = r(1, 0);
    const cplx ideal = target.b * std::conj(target.a);
    if (std::abs(coherence) < 1e-12 || std::abs(ideal) < 1e-12) return std::numeric_limits<double>::quiet_NaN();
    return std::arg(coherence / ideal);
}

StateVector ideal_transfer(const StateVector& psi, int receiver, int sender) {
    const BasisPtr& basis = psi.basis();
    const auto r = static_cast<std::size_t>(receiver);
    const auto s = static_cast<std::size_t>(sender);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(basis->dim()));
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        const cplx amp = psi.amplitudes()(static_cast<Eigen::Index>(i));
        if (std::abs(amp) < 1e-14) continue;
        const BasisState& st = basis->state(i);
        const bool vacuum = std::all_of(st.photons.begin(), st.photons.end(), [](int n) { return n == 0; });
        if (!vacuum || st.atoms[r] != Level::g0 || st.atoms[s] == Level::e)
            throw std::logic_error("ideal_transfer: receiver must be in |0> and modes in vacuum (state " + st.label() + ")");
        BasisState moved = st;
        moved.atoms[r] = st.atoms[s];
        moved.atoms[s] = Level::g0;
        out(static_cast<Eigen::Index>(basis->index_of(moved))) += amp;
    }
    return StateVector(basis, std::move(out));
}

RunResult run_schedule(const PulseSchedule& schedule, const AtomStateSpec& initial, const NoiseConfig& noise,
                       const RunOptions& options) {
    schedule.validate();
    initial.validate();
    noise.validate();
    options.integrator.validate();

    std::set<int> node_set;
    for (int n : schedule.participants()) node_set.insert(n);
    for (const auto& [n, q] : initial.atoms) {
        if (n >= schedule.node_count) throw std::invalid_argument("run_schedule: initial state names node outside the network");
        node_set.insert(n);
    }
    const std::vector<int> nodes(node_set.begin(), node_set.end());
    const int local_count = static_cast<int>(nodes.size());
    auto local = [&](int node) { return static_cast<int>(std::find(nodes.begin(), nodes.end(), node) - nodes.begin()); };

    BasisPtr basis = build_basis(SystemSpec::network(local_count, options.photon_cutoff));
    if (options.restrict_to_sector) {
        int excitation = 0;
        for (int n : nodes)
            if (std::abs(initial.at(n).b) > 0.0) ++excitation;
        basis = filter_excitation(basis, excitation);
    }

    Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis->dim()));
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        const BasisState& st = basis->state(i);
        if (std::any_of(st.photons.begin(), st.photons.end(), [](int p) { return p != 0; })) continue;
        cplx amp = 1.0;
        for (int k = 0; k < local_count; ++k) {
            const Qubit q = initial.at(nodes[static_cast<std::size_t>(k)]);
            const Level l = st.atoms[static_cast<std::size_t>(k)];
            amp *= l == Level::g0 ? q.a : (l == Level::g1 ? q.b : cplx{});
        }
        amps(static_cast<Eigen::Index>(i)) = amp;
    }
    StateVector psi(basis, std::move(amps));
    StateVector ideal = psi;

    const bool unitary = noise.is_zero();
    const std::vector<Collapse> collapse = unitary ? std::vector<Collapse>{} : collapse_operators(basis, noise);
    std::optional<DensityMatrix> rho;
    if (!unitary) rho.emplace(DensityMatrix::pure(psi));

    EvolutionDiagnostics diag;
    std::vector<double> fidelities;
    double t0 = 0.0;
    for (const auto& seg : schedule.segments) {
        const int r = local(seg.receiver);
        const int s = local(seg.sender);
        CouplingConfig cfg = CouplingConfig::uniform(local_count, seg.g, seg.lambda);
        cfg.rabi[static_cast<std::size_t>(r)] = seg.omega;
        cfg.rabi[static_cast<std::size_t>(s)] = -seg.omega;
        cfg.active_nodes = {std::min(r, s), std::max(r, s)};
        const Operator h = total_hamiltonian(basis, cfg);

        ideal = ideal_transfer(ideal, r, s);
        if (options.observer) {
            const int n = std::max(options.samples_per_segment, 1);
            std::vector<double> times(static_cast<std::size_t>(n) + 1);
            for (int k = 0; k <= n; ++k) times[static_cast<std::size_t>(k)] = seg.duration * k / n;
            const std::size_t index = fidelities.size();
            if (unitary) {
                psi = evolve_unitary(
                    h, psi, times,
                    [&](double t, const StateVector& v) {
                        options.observer({index, t0 + t, DensityMatrix::pure(v), ideal});
                    },
                    options.integrator, &diag);
            } else {
                rho = evolve_lindblad(
                    h, collapse, *rho, times,
                    [&](double t, const DensityMatrix& m) { options.observer({index, t0 + t, m, ideal}); },
                    options.integrator, &diag);
            }
        } else if (unitary) {
            psi = evolve_unitary(h, psi, seg.duration, options.integrator, &diag);
        } else {
            rho = evolve_lindblad(h, collapse, *rho, seg.duration, options.integrator, &diag);
        }
        fidelities.push_back(unitary ? fidelity(psi, ideal) : fidelity(*rho, ideal));
        t0 += seg.duration;
    }

    RunResult result{basis,
                     nodes,
                     unitary ? DensityMatrix::pure(psi) : *rho,
                     unitary ? std::optional<StateVector>(psi) : std::nullopt,
                     ideal,
                     std::move(fidelities),
                     std::move(diag)};
    if (unitary) {
        const Physicality p = result.final_state.physicality();
        result.diagnostics.max_trace_deviation = std::max(result.diagnostics.max_trace_deviation, p.trace_deviation);
        result.diagnostics.min_eigenvalue = std::min(result.diagnostics.min_eigenvalue, p.min_eigenvalue);
    }
    return result;
}

RunResult run_qst(const QstParameters& params, const Qubit& input, const RunOptions& options) {
    const PulseSchedule sched = qst_schedule(1, 0, params.omega, params.g, params.lambda);
    AtomStateSpec initial;
    initial.set(1, input);
    return run_schedule(sched, initial, params.noise, options);
}

}  // namespace zenoqst
