// SPDX-License-Identifier: Apache-2.0
//
// amafris - array-fed reflective surface channel modelling and system simulation
// Copyright (C) 2026 The amafris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "amafris/pem.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace amafris
{
    namespace
    {
        // Unit-modulus rotation that makes the largest-magnitude entry real-positive
        cplx gauge_phase(const CVector &v)
        {
            Eigen::Index imax = 0;
            v.cwiseAbs().maxCoeff(&imax);
            const double mag = std::abs(v(imax));
            return mag > 0.0 ? std::conj(v(imax)) / mag : cplx(1.0, 0.0);
        }

        SingularTriplet finish(const CMatrix &t, CVector w, double sigma, int iterations)
        {
            w *= gauge_phase(w);
            SingularTriplet out;
            out.sigma1 = sigma;
            out.iterations = iterations;
            out.u1 = (t * w) / sigma;
            out.w1 = std::move(w);
            out.residual = (t.adjoint() * out.u1 - sigma * out.w1).norm();
            return out;
        }
    }

    SingularTriplet principal_triplet(const CMatrix &t, const PowerIterationOptions &opt)
    {
        if (t.size() == 0)
            throw ValidationError("principal_triplet: empty matrix");
        if (!t.allFinite())
            throw ValidationError("principal_triplet: non-finite entries");
        if (!(opt.tol > 0.0))
            throw ValidationError("principal_triplet: tolerance must be positive");
        if (opt.max_iter < 1)
            throw ValidationError("principal_triplet: max_iter must be >= 1");
        if (t.cwiseAbs().maxCoeff() == 0.0)
            throw ValidationError("principal_triplet: zero matrix has no principal mode");

        const CMatrix gram = t.adjoint() * t;

        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        CVector w(gram.cols());
        for (Eigen::Index i = 0; i < w.size(); ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            w(i) = cplx(re, im);
        }
        w.normalize();

        double sigma_prev = 0.0;
        for (int it = 1; it <= opt.max_iter; ++it)
        {
            CVector next = gram * w;
            double norm = next.norm();
            if (norm == 0.0)
            {
                // Start vector in the null space; restart from a fresh draw
                for (Eigen::Index i = 0; i < w.size(); ++i)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    w(i) = cplx(re, im);
                }
                w.normalize();
                continue;
            }
            w = next / norm;
            // Rayleigh quotient of the normalized iterate gives sigma^2
            const double lambda = std::real(w.dot(gram * w));
            const double sigma = std::sqrt(std::max(lambda, 0.0));
            if (sigma > 0.0 && std::abs(sigma - sigma_prev) < opt.tol * sigma)
                return finish(t, std::move(w), sigma, it);
            sigma_prev = sigma;
        }

        SingularTriplet best = finish(t, w, std::max(sigma_prev, std::numeric_limits<double>::min()), opt.max_iter);
        throw ConvergenceError("principal_triplet: no convergence after " + std::to_string(opt.max_iter) +
                                   " iterations",
                               std::move(best));
    }

    SingularTriplet principal_triplet(const ChannelMatrix &t, const PowerIterationOptions &opt)
    {
        return principal_triplet(t.entries, opt);
    }

    CeilingResult apply_passivity_ceiling(const ChannelMatrix &t, const PowerIterationOptions &opt)
    {
        const auto triplet = principal_triplet(t, opt);
        CeilingResult out{t, 1.0, triplet.sigma1};
        if (triplet.sigma1 > 1.0)
        {
            out.applied_scale = 1.0 / triplet.sigma1;
            out.matrix.entries *= out.applied_scale;
            out.matrix.passivity_scaled = true;
            out.matrix.applied_scale = t.applied_scale * out.applied_scale;
        }
        return out;
    }

    ExcitationVector ris_excitation(const ChannelMatrix &t, const CVector &w, std::size_t n_x, std::size_t n_y)
    {
        if (w.size() != t.n_amaf())
            throw ValidationError("ris_excitation: feed vector length " + std::to_string(w.size()) +
                                  " does not match " + std::to_string(t.n_amaf()) + " AMAF ports");
        if (Eigen::Index(n_x * n_y) != t.n_ris())
            throw ValidationError("ris_excitation: layout " + std::to_string(n_x) + "x" + std::to_string(n_y) +
                                  " does not match " + std::to_string(t.n_ris()) + " RIS ports");
        return {t.entries * w, n_x, n_y};
    }

    PowerTaper power_taper_db(const ExcitationVector &e)
    {
        if (e.values.size() == 0)
            throw ValidationError("power_taper_db: empty excitation");
        const Eigen::VectorXd power = e.values.cwiseAbs2();
        const double max_p = power.maxCoeff();
        const double min_p = power.minCoeff();
        if (max_p == 0.0)
            throw ValidationError("power_taper_db: all-zero excitation");
        if (min_p == 0.0)
            return {std::numeric_limits<double>::infinity(), true};
        return {10.0 * std::log10(max_p / min_p), false};
    }

    void write_excitation_grid_csv(std::ostream &os, const ExcitationVector &e)
    {
        const Eigen::VectorXd mag = e.values.cwiseAbs();
        const double peak = mag.maxCoeff();
        const double scale = peak > 0.0 ? 1.0 / peak : 0.0;
        os << std::setprecision(17);
        for (std::size_t j = 0; j < e.n_y; ++j)
        {
            for (std::size_t i = 0; i < e.n_x; ++i)
            {
                if (i > 0)
                    os << ',';
                os << mag(Eigen::Index(j * e.n_x + i)) * scale;
            }
            os << '\n';
        }
    }
}
