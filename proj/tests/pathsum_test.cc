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

#include "feynroute/pathsum.hpp"

#include <numbers>

#include "gtest/gtest.h"

#include "feynroute/threebox.hpp"
#include "test_util.hpp"

using namespace feynroute;

namespace {

Path path(std::initializer_list<std::size_t> indices) {
    return Path{std::vector<std::size_t>(indices)};
}

/// Sum over paths written as nested loops over an explicit index vector,
/// independent of the library's odometer.
Complex brute_force_total(const ComplexVector &i, const ComplexVector &z, const std::vector<ComplexMatrix> &us) {
    const Eigen::Index n = i.size();
    const std::size_t k = us.size();
    std::vector<Eigen::Index> idx(k, 0);
    Complex total = 0.0;
    while (true) {
        Complex amp = 0.0;
        for (Eigen::Index a = 0; a < n; ++a) {
            amp += us[0](idx[0], a) * i[a];
        }
        for (std::size_t j = 1; j < k; ++j) {
            amp *= us[j](idx[j], idx[j - 1]);
        }
        amp *= std::conj(z[idx[k - 1]]);
        total += amp;
        std::size_t d = k;
        while (d > 0) {
            --d;
            if (++idx[d] < n) {
                break;
            }
            idx[d] = 0;
            if (d == 0) {
                return total;
            }
        }
    }
}

}  // namespace

TEST(pathsum, zero_hamiltonian_path_amplitudes) {
    SlicedEvolution evo = SlicedEvolution::free(3, 1);
    State i = threebox::initial();
    State f = threebox::final_f();
    EXPECT_NEAR(std::abs(path_amplitude(i, f, path({0}), evo) - Complex(1.0 / 3.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(path_amplitude(i, f, path({2}), evo) - Complex(-1.0 / 3.0)), 0.0, 1e-15);

    SlicedEvolution evo3 = SlicedEvolution::free(3, 3);
    EXPECT_NEAR(std::abs(path_amplitude(i, f, path({0, 0, 0}), evo3) - Complex(1.0 / 3.0)), 0.0, 1e-15);
    EXPECT_EQ(path_amplitude(i, f, path({0, 1, 1}), evo3), Complex(0.0));
    EXPECT_EQ(path_amplitude(i, f, path({2, 2, 0}), evo3), Complex(0.0));
}

TEST(pathsum, path_amplitude_errors) {
    SlicedEvolution evo = SlicedEvolution::free(3, 2);
    State i = threebox::initial();
    EXPECT_THROW(path_amplitude(i, State::basis(2, 0), path({0, 0}), evo), DimensionError);
    EXPECT_THROW(path_amplitude(i, i, path({0}), evo), DimensionError);
    EXPECT_THROW(path_amplitude(i, i, path({0, 3}), evo), DimensionError);
}

TEST(pathsum, enumerate_threebox) {
    PathEnsemble e = enumerate(threebox::initial(), threebox::final_f(), SlicedEvolution::free(3, 1));
    ASSERT_EQ(e.terms.size(), 3u);
    const double expected[] = {1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0};
    for (std::size_t n = 0; n < 3; ++n) {
        EXPECT_EQ(e.terms[n].path, path({n}));
        EXPECT_LE(std::abs(e.terms[n].amplitude - expected[n]), 1e-15);
    }
    EXPECT_LE(std::abs(e.total() - Complex(1.0 / 3.0)), 1e-15);
}

TEST(pathsum, enumerate_identity_two_level) {
    PathEnsemble e = enumerate(State::basis(2, 0), State::basis(2, 0), SlicedEvolution::free(2, 1));
    ASSERT_EQ(e.terms.size(), 2u);
    EXPECT_EQ(e.terms[0].amplitude, Complex(1.0));
    EXPECT_EQ(e.terms[1].amplitude, Complex(0.0));
}

TEST(pathsum, enumerate_random_slices_matches_matrix_product) {
    oracle::Rng rng(17);
    std::vector<ComplexMatrix> us;
    std::vector<Operator> ops;
    for (int j = 0; j < 4; ++j) {
        us.push_back(oracle::random_unitary_matrix(rng, 3));
        ops.push_back(Operator::from_matrix(us.back()));
    }
    State i = oracle::random_state(rng, 3);
    State z = oracle::random_state(rng, 3);
    PathEnsemble e = enumerate(i, z, SlicedEvolution(ops));
    EXPECT_EQ(e.terms.size(), 81u);
    Complex product = z.coeffs().dot(us[3] * us[2] * us[1] * us[0] * i.coeffs());
    EXPECT_LE(std::abs(e.total() - product), 1e-12);
    EXPECT_LE(std::abs(e.total() - brute_force_total(i.coeffs(), z.coeffs(), us)), 1e-12);
}

TEST(pathsum, enumerate_order_is_lexicographic) {
    PathEnsemble e = enumerate(State::basis(3, 0), State::basis(3, 0), SlicedEvolution::free(3, 3));
    ASSERT_EQ(e.terms.size(), 27u);
    for (std::size_t t = 1; t < e.terms.size(); ++t) {
        EXPECT_LT(e.terms[t - 1].path, e.terms[t].path);
    }
}

TEST(pathsum, enumerate_cap_is_a_hard_error) {
    EnumerateOptions options;
    options.cap = 80;
    SlicedEvolution evo = SlicedEvolution::free(3, 4);
    EXPECT_THROW(enumerate(State::basis(3, 0), State::basis(3, 0), evo, options), PathExplosionError);
    options.cap = 81;
    EXPECT_EQ(enumerate(State::basis(3, 0), State::basis(3, 0), evo, options).terms.size(), 81u);
    // 8^8 is above the default cap of 10^7.
    EXPECT_THROW(enumerate(State::basis(8, 0), State::basis(8, 0), SlicedEvolution::free(8, 8)),
                 PathExplosionError);
}

TEST(pathsum, zero_hamiltonian_collapse) {
    oracle::Rng rng(23);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t k = 1; k <= 5; ++k) {
            State i = oracle::random_state(rng, n);
            State z = oracle::random_state(rng, n);
            EnumerateOptions options;
            options.prune = true;
            PathEnsemble e = enumerate(i, z, SlicedEvolution::free(n, k), options);
            EXPECT_EQ(e.terms.size(), n);
            for (const auto &term : e.terms) {
                EXPECT_TRUE(term.path.is_constant());
            }
        }
    }
}

TEST(pathsum, amplitude_completeness_and_unitarity) {
    oracle::Rng rng(29);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t k = 1; k <= 6; ++k) {
            std::vector<Operator> ops;
            for (std::size_t j = 0; j < k; ++j) {
                ops.push_back(oracle::random_unitary(rng, n));
            }
            SlicedEvolution evo(ops);
            State i = oracle::random_state(rng, n);
            ComplexMatrix total = evo.total_propagator().matrix();
            double probability = 0.0;
            for (std::size_t zi = 0; zi < n; ++zi) {
                State z = State::basis(n, zi);
                Complex sum = enumerate(i, z, evo).total();
                EXPECT_LE(std::abs(sum - z.coeffs().dot(total * i.coeffs())), 1e-10);
                probability += std::norm(sum);
            }
            EXPECT_NEAR(probability, 1.0, 1e-10);
        }
    }
}

TEST(pathsum, sliced_evolution_validation) {
    ComplexMatrix m(2, 2);
    m << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(SlicedEvolution({Operator::from_matrix(m)}), UnitarityError);
    EXPECT_THROW(SlicedEvolution({Operator::identity(2), Operator::identity(3)}), DimensionError);
    EXPECT_THROW(SlicedEvolution({Operator::identity(2)}, {1.0, 2.0}), DimensionError);
    EXPECT_THROW(SlicedEvolution(std::vector<Operator>{}), DimensionError);
}

TEST(pathsum, path_functional_examples) {
    ProjectorFamily p1 = threebox::open_box(0);
    std::vector<double> impulse = {1.0};
    EXPECT_EQ(path_functional(path({0}), impulse, p1), 1.0);
    EXPECT_EQ(path_functional(path({1}), impulse, p1), 0.0);

    // Two kicks of opposite sign measure the jump n_after - n_before.
    ProjectorFamily number = ProjectorFamily::from_labels({1.0, 2.0});
    std::vector<double> kicks = {-1.0, 1.0};
    EXPECT_EQ(path_functional(path({0, 1}), kicks, number), 1.0);
    EXPECT_EQ(path_functional(path({1, 0}), kicks, number), -1.0);
    EXPECT_EQ(path_functional(path({1, 1}), kicks, number), 0.0);

    std::vector<double> zeros = {0.0, 0.0, 0.0};
    EXPECT_EQ(path_functional(path({0, 2, 1}), zeros, threebox::open_box(2)), 0.0);
}

TEST(pathsum, with_functionals_attaches_values) {
    PathEnsemble e = enumerate(threebox::initial(), threebox::final_f(), SlicedEvolution::free(3, 1));
    EXPECT_FALSE(e.has_functionals());
    std::vector<double> impulse = {1.0};
    PathEnsemble tagged = with_functionals(e, impulse, threebox::open_box(0));
    ASSERT_TRUE(tagged.has_functionals());
    EXPECT_EQ(*tagged.terms[0].functional, 1.0);
    EXPECT_EQ(*tagged.terms[1].functional, 0.0);
    EXPECT_EQ(*tagged.terms[2].functional, 0.0);
}

TEST(pathsum, total_amplitude_zero_hamiltonian) {
    oracle::Rng rng(31);
    State i = oracle::random_state(rng, 3);
    State z = oracle::random_state(rng, 3);
    Operator zero = Operator::hermitian(ComplexMatrix::Zero(3, 3));
    for (std::size_t k : {1u, 2u, 7u, 64u}) {
        EXPECT_LE(std::abs(total_amplitude(i, z, zero, 1.0, k) - inner(z, i)), 1e-14);
    }
}

TEST(pathsum, total_amplitude_pauli_x) {
    ComplexMatrix sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    Operator h = Operator::hermitian(sx);
    Complex a = total_amplitude(State::basis(2, 0), State::basis(2, 1), h, std::numbers::pi / 2.0, 64);
    // exp(-i sigma_x pi/2) = -i sigma_x.
    EXPECT_NEAR(std::abs(a), 1.0, 1e-9);
    EXPECT_LE(std::abs(a - Complex(0.0, -1.0)), 1e-6);
}

TEST(pathsum, total_amplitude_equals_enumerated_sum) {
    oracle::Rng rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        Operator h = oracle::random_hermitian(rng, 3);
        State i = oracle::random_state(rng, 3);
        State z = oracle::random_state(rng, 3);
        for (std::size_t k = 1; k <= 5; ++k) {
            Complex sum = enumerate(i, z, SlicedEvolution::from_hamiltonian(h, 1.0, k)).total();
            EXPECT_LE(std::abs(total_amplitude(i, z, h, 1.0, k) - sum), 1e-12);
        }
    }
}

TEST(pathsum, total_amplitude_converges_in_k) {
    oracle::Rng rng(41);
    Operator h = oracle::random_hermitian(rng, 3);
    State i = oracle::random_state(rng, 3);
    State z = oracle::random_state(rng, 3);
    Complex exact = z.coeffs().dot(oracle::expm_by_diagonalization(h.matrix(), 1.0) * i.coeffs());
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= 64; k *= 2) {
        double err = std::abs(total_amplitude(i, z, h, 1.0, k) - exact);
        EXPECT_LT(err, previous) << "K=" << k;
        previous = err;
    }
    EXPECT_LE(previous, 1e-6);
}

TEST(pathsum, pade_slice_is_unitary) {
    oracle::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        Operator h = oracle::random_hermitian(rng, 4);
        EXPECT_TRUE(pade_slice(h, 0.7).is_unitary(1e-12));
    }
}
