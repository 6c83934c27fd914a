#pragma once

#include <cstdint>

#include "easta/branching.hpp"
#include "easta/config.hpp"
#include "easta/table.hpp"

namespace easta {

// Everything the experiment commands derive from one model configuration.
struct Pipeline {
    HamiltonianPath path;
    EigenFrame frame;
    PhaseRecord phases;
    PropagationResult prop;
};

Pipeline run_pipeline(const DriveSchedule& schedule, std::size_t steps);

// Per-node overlap traces: bare drive vs environment-assisted transport on
// the even branching state. Columns: t_over_tau, bare_overlap_<n>...,
// easta_overlap_<n>....
ResultTable figure_overlap(const RunConfig& cfg, std::uint64_t seed);

// Cost curves of the counterdiabatic field and of the environment drive.
// Columns: t_over_tau, cost_cd, cost_env, abs_difference.
ResultTable figure_cost(const RunConfig& cfg, std::uint64_t seed);

// Total costs across protocol durations. Columns: tau, cost_cd_total,
// cost_env_total.
ResultTable sweep_tau(const RunConfig& cfg, std::uint64_t seed);

// Seeded smooth gapped test Hamiltonian H(t) = A + sin(pi t / tau) * B with
// A, B random Hermitian, rejection-sampled until the smallest eigenvalue
// gap over the grid is >= min_gap.
HamiltonianPath random_gapped_path(Eigen::Index dim, std::size_t steps, double tau,
                                   std::uint64_t seed, double min_gap = 0.1);

// Deterministic standard-normal stream (splitmix64 + Box-Muller), so seeded
// runs are reproducible across standard libraries.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : state_(seed) {}
    double next();

  private:
    std::uint64_t next_u64();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Matrix random_hermitian(Eigen::Index dim, NormalStream& rng);
Matrix random_unitary(Eigen::Index dim, NormalStream& rng);

} // namespace easta
