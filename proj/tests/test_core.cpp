// Copyright 2026 The rydbound Authors
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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rydbound/bound/closed_form.hpp"
#include "rydbound/core/analysis.hpp"
#include "rydbound/core/models.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/pulse.hpp"
#include "rydbound/core/schmidt.hpp"
#include "test_util.hpp"

namespace rydbound {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

TEST(Pulse, RejectsInvalidInput) {
    EXPECT_THROW(ControlPulse(0.0, {1.0, 1.0}, {0.0, 0.0}), ValidationError);
    EXPECT_THROW(ControlPulse(1.0, {1.0}, {0.0}), ValidationError);
    EXPECT_THROW(ControlPulse(1.0, {1.0, 2.0}, {0.0}), ValidationError);
    EXPECT_THROW(ControlPulse(1.0, {1.0, NAN}, {0.0, 0.0}), ValidationError);
    EXPECT_THROW(ControlPulse(INFINITY, {1.0, 1.0}, {0.0, 0.0}), ValidationError);
}

TEST(Pulse, AreaUsesMagnitude) {
    const ControlPulse p(2.0, {1.0, -1.0, 2.0, -2.0}, {0.0, 0.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(p.dt(), 0.5);
    EXPECT_DOUBLE_EQ(p.area(), 3.0);
}

TEST(Pulse, ControlsRoundTrip) {
    const ControlPulse p(3.0, {1.0, 2.0, 3.0}, {-1.0, 0.5, 0.25});
    const auto x = p.controls();
    EXPECT_EQ(ControlPulse::from_controls(3.0, x), p);
}

TEST(SymmetricHamiltonian, Examples) {
    const auto h0 = build_symmetric_hamiltonian(0.0, 0.0);
    EXPECT_LT((h0 - SymmetricModel::Operator(Eigen::Vector3cd(0, 0, 1).asDiagonal())).norm(), 1e-15);

    const auto h1 = build_symmetric_hamiltonian(sqrt2, 0.0);
    EXPECT_NEAR(h1(0, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(h1(1, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(h1(1, 2).real(), 1.0, 1e-15);
    EXPECT_NEAR(h1(2, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(h1(2, 2).real(), 1.0, 1e-15);
    EXPECT_EQ(h1(0, 2), cd(0.0));

    const auto h2 = build_symmetric_hamiltonian(1.0, 0.5);
    EXPECT_NEAR(h2(1, 1).real(), -0.5, 1e-15);
    EXPECT_NEAR(std::abs(h2(2, 2)), 0.0, 1e-15);
    EXPECT_LT((h2 - h2.adjoint()).norm(), 1e-15);
}

TEST(TwoAtomHamiltonian, Examples) {
    EXPECT_LT((build_two_atom_hamiltonian(0.0, 0.0) -
               TwoAtomModel::Operator(Eigen::Vector4cd(0, 0, 0, 1).asDiagonal()))
                  .norm(),
              1e-15);
    EXPECT_LT((build_two_atom_hamiltonian(0.0, 1.0) -
               TwoAtomModel::Operator(Eigen::Vector4cd(0, -1, -1, -1).asDiagonal()))
                  .norm(),
              1e-15);
}

TEST(TwoAtomHamiltonian, RestrictsToSymmetricBlock) {
    const auto v = basis::symmetric_isometry();
    EXPECT_LT((v.adjoint() * v - Eigen::Matrix3cd::Identity()).norm(), 1e-15);
    for (double om : {0.0, 0.7, -1.3}) {
        for (double de : {0.0, 0.4, -2.0}) {
            const Eigen::Matrix3cd block = v.adjoint() * build_two_atom_hamiltonian(om, de) * v;
            EXPECT_LT((block - build_symmetric_hamiltonian(om, de)).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(Propagate, IdleRydbergPairAccumulatesPiPhase) {
    const auto traj = propagate<SymmetricModel>(ControlPulse::zero(pi, 10), basis::rr());
    EXPECT_NEAR(std::abs(traj.states.back()(2) - cd(-1.0)), 0.0, 1e-10);
}

TEST(Propagate, GroundStateIsDecoupled) {
    const auto traj = propagate<SymmetricModel>(ControlPulse::zero(4.2, 17), basis::gg());
    for (const auto& s : traj.states) EXPECT_EQ(s, basis::gg());
}

TEST(Propagate, FirstSnapshotIsInitialState) {
    const SymmetricState psi = basis::bell_target();
    const auto traj = propagate<SymmetricModel>(test::random_pulse(3.0, 20, 1), psi);
    EXPECT_EQ(traj.states.front(), psi);
    EXPECT_EQ(traj.states.size(), 21u);
}

TEST(Propagate, SingleExcitationDecay) {
    const auto traj = propagate<SymmetricModel>(ControlPulse::zero(1.0, 8), basis::w(), 0.01);
    EXPECT_NEAR(traj.states.back().squaredNorm(), std::exp(-0.01), 1e-10);
}

TEST(Propagate, RejectsBadInput) {
    const auto pulse = ControlPulse::zero(1.0, 4);
    EXPECT_THROW(propagate<SymmetricModel>(pulse, SymmetricState(1.0, 1.0, 0.0)), ValidationError);
    EXPECT_THROW(propagate<SymmetricModel>(pulse, basis::gg(), -0.1), ValidationError);
}

TEST(Propagate, UnitaryForRandomPulses) {
    for (int k = 0; k < 120; ++k) {
        const auto pulse = test::random_pulse(6.8, 40, 100 + k);
        const auto traj = propagate<SymmetricModel>(pulse, basis::gg());
        for (const auto& s : traj.states) ASSERT_NEAR(s.norm(), 1.0, 1e-12);
        const auto two = propagate<TwoAtomModel>(pulse, TwoAtomState::Unit(2));
        for (const auto& s : two.states) ASSERT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(Propagate, NormNonIncreasingWithDecay) {
    for (int k = 0; k < 20; ++k) {
        const auto traj = propagate<SymmetricModel>(test::random_pulse(5.0, 50, 300 + k),
                                                    basis::gg(), 0.3);
        for (std::size_t n = 1; n < traj.states.size(); ++n) {
            ASSERT_LE(traj.states[n].norm(), traj.states[n - 1].norm() + 1e-15);
        }
    }
}

TEST(Propagate, DecayMatchesRydbergTime) {
    constexpr double gamma = 1e-4;
    int checked = 0;
    for (int k = 0; k < 40; ++k) {
        const auto pulse = test::random_pulse(6.8, 800, 500 + k);
        const auto closed = propagate<SymmetricModel>(pulse, basis::gg());
        const double tr = integrated_rydberg_time(closed, Quadrature::trapezoid);
        if (tr < 1.0 || tr > 10.0) continue;
        const auto open = propagate<SymmetricModel>(pulse, basis::gg(), gamma);
        const double deficit = 1.0 - open.states.back().squaredNorm();
        EXPECT_NEAR(deficit / (gamma * tr), 1.0, 1e-2);
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

TEST(Propagate, SymmetricAndTwoAtomPicturesAgree) {
    for (int k = 0; k < 20; ++k) {
        const auto pulse = test::random_pulse(6.8, 60, 700 + k);
        const SymmetricState start = test::random_symmetric_state(700 + k);
        const auto sym = propagate<SymmetricModel>(pulse, start);
        const auto full = propagate<TwoAtomModel>(pulse, basis::to_two_atom(start));
        for (std::size_t n = 0; n < sym.states.size(); ++n) {
            ASSERT_LT((basis::to_two_atom(sym.states[n]) - full.states[n]).cwiseAbs().maxCoeff(),
                      1e-10);
        }
    }
}

TEST(RydbergPopulation, Examples) {
    EXPECT_EQ(rydberg_population<3>(basis::gg()), 0.0);
    EXPECT_EQ(rydberg_population<3>(basis::w()), 1.0);
    EXPECT_NEAR(rydberg_population<3>(basis::bell_target()), 1.0, 1e-15);
    EXPECT_NEAR(rydberg_population<4>(basis::to_two_atom(basis::bell_target())), 1.0, 1e-15);
}

TEST(IntegratedRydbergTime, Examples) {
    const auto single = propagate<SymmetricModel>(ControlPulse::zero(pi, 9), basis::w());
    EXPECT_NEAR(integrated_rydberg_time(single), pi, 1e-12);
    EXPECT_NEAR(integrated_rydberg_time(single, Quadrature::left_rectangle), pi, 1e-12);
    const auto idle = propagate<SymmetricModel>(ControlPulse::zero(3.0, 9), basis::gg());
    EXPECT_EQ(integrated_rydberg_time(idle), 0.0);
}

TEST(StateFidelity, Examples) {
    const SymmetricState psi = test::random_symmetric_state(5);
    EXPECT_NEAR(state_fidelity(psi, psi), 1.0, 1e-14);
    EXPECT_EQ(state_fidelity(basis::gg(), basis::w()), 0.0);
    const SymmetricState phased = std::exp(cd(0.0, 1.234)) * psi;
    EXPECT_NEAR(state_fidelity(psi, phased), 1.0, 1e-14);
}

TEST(Schmidt, Examples) {
    const auto product = schmidt_decompose(to_bipartite(basis::gg()));
    EXPECT_NEAR(product.coeffs(0), 1.0, 1e-15);
    EXPECT_NEAR(product.coeffs(1), 0.0, 1e-15);
    EXPECT_NEAR(min_entropy(product), 0.0, 1e-15);
    EXPECT_NEAR(von_neumann_entropy(product), 0.0, 1e-15);

    const auto bell = schmidt_decompose(to_bipartite(basis::bell_target()));
    EXPECT_NEAR(bell.coeffs(0), 1.0 / sqrt2, 1e-12);
    EXPECT_NEAR(bell.coeffs(1), 1.0 / sqrt2, 1e-12);
    EXPECT_NEAR(min_entropy(bell), 1.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(bell), 1.0, 1e-12);

    const auto partial = schmidt_decompose(
        to_bipartite(SymmetricState(std::sqrt(0.8), 0.0, std::sqrt(0.2))));
    EXPECT_NEAR(partial.coeffs(0), std::sqrt(0.8), 1e-12);
    EXPECT_NEAR(partial.coeffs(1), std::sqrt(0.2), 1e-12);
    EXPECT_NEAR(min_entropy(partial), -std::log2(0.8), 1e-12);
    EXPECT_NEAR(von_neumann_entropy(partial), 0.7219, 1e-4);
}

TEST(Schmidt, RejectsInvalidState) {
    EXPECT_THROW(make_bipartite(Eigen::MatrixXcd::Identity(2, 2), 1), ValidationError);
    EXPECT_THROW(make_bipartite(Eigen::MatrixXcd::Zero(2, 3), 1), ValidationError);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 1.0;
    EXPECT_THROW(make_bipartite(m, 2), ValidationError);
}

TEST(Schmidt, ReconstructionAndOrderingForRandomStates) {
    for (int d : {2, 3}) {
        for (int k = 0; k < 200; ++k) {
            const auto state = test::random_bipartite(d, 1000 * d + k);
            const auto s = schmidt_decompose(state);
            ASSERT_NEAR(s.coeffs.squaredNorm(), 1.0, 1e-10);
            for (int i = 1; i < d; ++i) ASSERT_GE(s.coeffs(i - 1), s.coeffs(i));
            ASSERT_GE(s.coeffs(d - 1), 0.0);
            ASSERT_LT((s.reconstruct() - state.amps).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(Schmidt, PhaseConventionIsDeterministic) {
    const auto state = test::random_bipartite(3, 42);
    const auto a = schmidt_decompose(state);
    const auto b = schmidt_decompose(make_bipartite(std::exp(cd(0.0, 0.3)) * state.amps, 2));
    for (int i = 0; i < 3; ++i) {
        int first = 0;
        while (std::abs(a.basis_a(first, i)) < 1e-12) ++first;
        EXPECT_NEAR(a.basis_a(first, i).imag(), 0.0, 1e-14);
        EXPECT_GT(a.basis_a(first, i).real(), 0.0);
    }
    EXPECT_LT((a.basis_a - b.basis_a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Schmidt, RydbergPopulationFromWeights) {
    for (int d : {2, 3}) {
        for (int k = 0; k < 100; ++k) {
            const auto state = test::random_bipartite(d, 5000 + 100 * d + k);
            const auto s = schmidt_decompose(state);
            ASSERT_NEAR(rydberg_population(s, state.rydberg_index), rydberg_population(state),
                        1e-12);
        }
    }
}

TEST(MinEntropyRate, ZeroForProductState) {
    EXPECT_NEAR(min_entropy_rate(to_bipartite(basis::gg())), 0.0, 1e-15);
}

TEST(MinEntropyRate, ZeroWithoutRydbergOverlap) {
    // Rydberg level index 2 left unoccupied on both atoms.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = std::sqrt(0.7);
    m(0, 1) = cd(0.0, std::sqrt(0.1));
    m(1, 1) = std::sqrt(0.2);
    EXPECT_NEAR(min_entropy_rate(make_bipartite(m, 2)), 0.0, 1e-15);
}

TEST(MinEntropyRate, OptimalStateAtHalfBit) {
    // Two-term state c1 = 2^(-1/4) with the relative phase and Rydberg overlaps of the
    // rate-optimal configuration: rate (2/ln2) q / (1 + sqrt q)^2, q = sqrt2 - 1.
    const double c1 = std::pow(2.0, -0.25);
    const double c2 = std::sqrt(1.0 - c1 * c1);
    const double q = sqrt2 - 1.0;
    const double expected = 2.0 / std::numbers::ln2 * q / std::pow(1.0 + std::sqrt(q), 2);
    // Overlap angle: sin^2 = c1 / (c1 + c2) for the first Schmidt vector on the Rydberg level.
    const double w1 = c2 / (c1 + c2);
    const double a = std::sqrt(w1);
    const double b = std::sqrt(1.0 - w1);
    Eigen::Matrix2cd u;
    u << b, a, a, -b;  // column i is u_i over (g, r)
    const Eigen::Matrix2cd v = u;
    const Eigen::Vector2cd coeffs(c1, cd(0.0, c2));
    const Eigen::MatrixXcd amps = u * coeffs.asDiagonal() * v.transpose();
    const double rate = min_entropy_rate(make_bipartite(amps, 1));
    EXPECT_NEAR(std::abs(rate), expected, 1e-12);
    EXPECT_NEAR(std::abs(rate), 0.442425, 1e-6);
    const double ratio = rydberg_population(make_bipartite(amps, 1)) / std::abs(rate);
    EXPECT_NEAR(ratio, 2.05725219, 1e-6);
}

TEST(MinEntropyRate, DegenerateSpectrumThrows) {
    EXPECT_THROW(min_entropy_rate(to_bipartite(basis::bell_target())), DegeneracyError);
}

TEST(MinEntropyRate, MatchesFiniteDifferenceAtSecondOrder) {
    // Pure interaction evolution; local drive terms leave S unchanged.
    for (int k = 0; k < 10; ++k) {
        const auto state = test::random_bipartite(2, 9000 + k);
        const TwoAtomState psi(state.amps(0, 0), state.amps(0, 1), state.amps(1, 0),
                               state.amps(1, 1));
        auto entropy_at = [&](double t) {
            TwoAtomState phi = psi;
            phi(3) *= std::exp(cd(0.0, -t));
            return min_entropy(schmidt_decompose(to_bipartite(phi)));
        };
        const double exact = min_entropy_rate(state);
        const double e1 = std::abs((entropy_at(1e-2) - entropy_at(-1e-2)) / 2e-2 - exact);
        const double e2 = std::abs((entropy_at(5e-3) - entropy_at(-5e-3)) / 1e-2 - exact);
        if (e1 < 1e-9) continue;
        EXPECT_NEAR(e1 / e2, 4.0, 0.2);
    }
}

TEST(TrajectoryAnalysis, IdleTrajectoryHasNoValidRatios) {
    const auto traj = propagate<SymmetricModel>(ControlPulse::zero(2.0, 20), basis::gg());
    for (const auto& row : trajectory_entropy_analysis(traj)) {
        EXPECT_EQ(row.entropy, 0.0);
        EXPECT_FALSE(row.valid());
    }
}

TEST(TrajectoryAnalysis, RatioRespectsPointwiseBound) {
    for (int k = 0; k < 5; ++k) {
        const auto traj = propagate<SymmetricModel>(test::random_pulse(6.8, 200, 40 + k),
                                                    basis::gg());
        for (const auto& row : trajectory_entropy_analysis(traj)) {
            if (!row.valid() || !row.analytic_rate || row.entropy <= 1e-6) continue;
            ASSERT_GE(*row.ratio, g_of_s(std::min(row.entropy, 1.0)) * (1.0 - 1e-9));
        }
    }
}

}  // namespace
}  // namespace rydbound
