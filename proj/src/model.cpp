#include "easta/model.hpp"

#include <cmath>
#include <sstream>

namespace easta {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Grid times carry O(eps) roundoff; don't reject them at the interval ends.
bool in_interval(double t, double tau) {
    const double slack = 1e-9 * (1.0 + tau);
    return t >= -slack && t <= tau + slack;
}

} // namespace

ScheduleKind schedule_kind_from_string(const std::string& name) {
    if (name == "cosine-squared") return ScheduleKind::CosineSquared;
    if (name == "linear") return ScheduleKind::Linear;
    if (name == "constant") return ScheduleKind::Constant;
    if (name == "custom-sampled") return ScheduleKind::CustomSampled;
    throw ContractError("unknown schedule kind: " + name);
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::CosineSquared: return "cosine-squared";
        case ScheduleKind::Linear: return "linear";
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::CustomSampled: return "custom-sampled";
    }
    throw ContractError("invalid schedule kind");
}

double schedule_value(const DriveSchedule& s, double t) {
    if (s.tau <= 0.0) {
        throw ContractError("schedule_value: tau must be positive");
    }
    if (!in_interval(t, s.tau)) {
        std::ostringstream msg;
        msg << "schedule_value: t = " << t << " outside [0, " << s.tau << "]";
        throw ContractError(msg.str());
    }
    const double tc = std::min(std::max(t, 0.0), s.tau);
    switch (s.kind) {
        case ScheduleKind::CosineSquared: {
            const double c = std::cos(kPi * tc / (2.0 * s.tau));
            return s.B * c * c;
        }
        case ScheduleKind::Linear:
            return s.B * (1.0 - tc / s.tau);
        case ScheduleKind::Constant:
            return s.B;
        case ScheduleKind::CustomSampled: {
            if (s.samples.size() < 2) {
                throw ContractError("schedule_value: custom-sampled needs >= 2 samples");
            }
            // Linear interpolation on the uniform sample grid over [0, tau].
            const double pos = tc / s.tau * static_cast<double>(s.samples.size() - 1);
            const auto lo = static_cast<std::size_t>(
                std::min(pos, static_cast<double>(s.samples.size() - 2)));
            const double w = pos - static_cast<double>(lo);
            return (1.0 - w) * s.samples[lo] + w * s.samples[lo + 1];
        }
    }
    throw ContractError("schedule_value: invalid schedule kind");
}

Matrix qubit_hamiltonian(double B, double J) {
    if (!std::isfinite(B) || !std::isfinite(J)) {
        throw ContractError("qubit_hamiltonian: couplings must be finite");
    }
    Matrix h(2, 2);
    h << Complex(J / 2.0, 0.0), Complex(B / 2.0, 0.0),
         Complex(B / 2.0, 0.0), Complex(-J / 2.0, 0.0);
    return h;
}

Matrix HamiltonianPath::midpoint(std::size_t k) const {
    if (k + 1 >= times.size()) {
        throw ContractError("HamiltonianPath::midpoint: step index out of range");
    }
    if (builder) {
        return builder(times[k] + 0.5 * dt());
    }
    return 0.5 * (samples[k] + samples[k + 1]);
}

namespace {

HamiltonianPath assemble_path(const std::function<Matrix(double)>& builder,
                              double t_end, std::size_t steps) {
    if (steps < 2) {
        throw ContractError("build_path: need at least 2 steps");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ContractError("build_path: t_end must be positive and finite");
    }
    HamiltonianPath path;
    path.times.resize(steps + 1);
    path.samples.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        path.times[k] = t_end * static_cast<double>(k) / static_cast<double>(steps);
        Matrix h = builder(path.times[k]);
        if (!is_hermitian(h)) {
            std::ostringstream msg;
            msg << "build_path: sample at grid index " << k << " is not Hermitian";
            throw ContractError(msg.str());
        }
        path.samples.push_back(std::move(h));
    }
    path.dim = path.samples.front().rows();
    for (const Matrix& h : path.samples) {
        if (h.rows() != path.dim) {
            throw ContractError("build_path: inconsistent sample dimensions");
        }
    }
    path.builder = builder;
    return path;
}

} // namespace

HamiltonianPath build_path(const DriveSchedule& s, std::size_t steps) {
    auto builder = [s](double t) { return qubit_hamiltonian(s.B, schedule_value(s, t)); };
    return assemble_path(builder, s.tau, steps);
}

HamiltonianPath build_path(const std::function<Matrix(double)>& builder,
                           double t_end, std::size_t steps) {
    if (!builder) {
        throw ContractError("build_path: builder is empty");
    }
    return assemble_path(builder, t_end, steps);
}

namespace {

// Make each column's largest-magnitude entry real positive.
void fix_first_node(Matrix& v) {
    for (Eigen::Index n = 0; n < v.cols(); ++n) {
        Eigen::Index imax = 0;
        v.col(n).cwiseAbs().maxCoeff(&imax);
        const Complex z = v(imax, n);
        if (std::abs(z) > 0.0) {
            v.col(n) *= std::conj(z) / std::abs(z);
        }
    }
}

} // namespace

EigenFrame eigenframe(const HamiltonianPath& path) {
    return eigenframe(path, Vector());
}

EigenFrame eigenframe(const HamiltonianPath& path, const Vector& first_node_phases) {
    EigenFrame frame;
    frame.times = path.times;
    frame.dim = path.dim;
    frame.energies.reserve(path.times.size());
    frame.vectors.reserve(path.times.size());
    frame.gap_min = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < path.times.size(); ++k) {
        EigResult eig = hermitian_eig(path.samples[k]);
        const double norm = eig.values.cwiseAbs().maxCoeff();
        const double gap = smallest_gap(eig.values);
        if (gap < degeneracy_threshold(norm)) {
            std::ostringstream msg;
            msg << "eigenframe: (near-)degenerate spectrum at grid index " << k
                << " (gap " << gap << ", threshold " << degeneracy_threshold(norm) << ")";
            throw GapError(msg.str(), k);
        }
        frame.gap_min = std::min(frame.gap_min, gap);
        frame.energies.push_back(std::move(eig.values));
        frame.vectors.push_back(std::move(eig.vectors));
    }

    fix_first_node(frame.vectors[0]);
    if (first_node_phases.size() > 0) {
        if (first_node_phases.size() != frame.dim) {
            throw ContractError("eigenframe: first-node phase count must match dimension");
        }
        for (Eigen::Index n = 0; n < frame.dim; ++n) {
            if (std::abs(std::abs(first_node_phases(n)) - 1.0) > 1e-12) {
                throw ContractError("eigenframe: first-node phases must have unit modulus");
            }
            frame.vectors[0].col(n) *= first_node_phases(n);
        }
    }

    // Parallel transport with a tracking guard: sorted order must coincide
    // with maximal-overlap matching, and the best match must dominate the
    // runner-up by a clear margin.
    for (std::size_t k = 1; k < frame.vectors.size(); ++k) {
        const Matrix overlaps = frame.vectors[k - 1].adjoint() * frame.vectors[k];
        for (Eigen::Index n = 0; n < frame.dim; ++n) {
            double best = -1.0, second = -1.0;
            Eigen::Index best_m = 0;
            for (Eigen::Index m = 0; m < frame.dim; ++m) {
                const double o = std::abs(overlaps(n, m));
                if (o > best) {
                    second = best;
                    best = o;
                    best_m = m;
                } else if (o > second) {
                    second = o;
                }
            }
            if (best_m != n) {
                std::ostringstream msg;
                msg << "eigenframe: eigenstate tracking lost sorted order at grid index "
                    << k << " (level " << n << ")";
                throw GapError(msg.str(), k);
            }
            if (frame.dim > 1 && best - second < 0.1) {
                std::ostringstream msg;
                msg << "eigenframe: ambiguous eigenstate matching at grid index " << k
                    << " (level " << n << ": best overlap " << best << ", runner-up "
                    << second << ")";
                throw GapError(msg.str(), k);
            }
            const Complex ov = overlaps(n, n);
            frame.vectors[k].col(n) *= std::conj(ov) / std::abs(ov);
        }
    }
    return frame;
}

} // namespace easta
