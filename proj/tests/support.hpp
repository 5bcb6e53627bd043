#pragma once

#include "piezosv/material.hpp"
#include "piezosv/section.hpp"
#include "piezosv/svcore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace support {

using namespace piezosv;

// Small-integer reference material; degenerate for the reduction (alpha2 = beta1 = 0).
inline MaterialTIP reference_material() { return {1.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0}; }

// Fixed generic material with every coupling active.
inline MaterialTIP generic_material() { return {1.0, 0.8, 1.2, 0.5, 0.7, -0.3, 0.6, 0.9, 0.4, 0.5}; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random material whose denominators all stay well away from zero.
inline MaterialTIP random_material(std::mt19937_64& rng) {
    for (;;) {
        MaterialTIP m;
        m.mu = uniform(rng, 0.5, 2.0);
        m.lambda = uniform(rng, -0.3, 1.5);
        m.alpha1 = uniform(rng, 0.5, 2.0);
        m.alpha2 = uniform(rng, -0.8, 0.8);
        m.alpha3 = uniform(rng, 0.2, 2.0);
        m.beta1 = uniform(rng, -1.0, 1.0);
        m.beta2 = uniform(rng, -1.0, 1.0);
        m.beta3 = uniform(rng, -1.0, 1.0);
        m.gamma1 = uniform(rng, 0.2, 2.0);
        m.gamma2 = uniform(rng, 0.2, 2.0);
        try {
            const DerivedModuli dm = derive_moduli(m);
            const NondegeneracyCheck c = check_nondegeneracy(dm);
            const double cancel = 2.0 * m.alpha2 * m.beta2 - m.alpha1 * m.beta1;
            if (c.pass && c.margin > 0.05 && std::abs(cancel) > 0.05 && std::abs(dm.B1) > 0.05 &&
                std::abs(dm.Dc) > 0.05 && std::abs(dm.A1) > 0.05)
                return m;
        } catch (const std::exception&) {
        }
    }
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

inline double max_abs_diff(const VectorField2D& a, const VectorField2D& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n)
        m = std::max({m, std::abs(a.values[n].x - b.values[n].x), std::abs(a.values[n].y - b.values[n].y)});
    return m;
}

// Full-index constitutive law built from the tensor definitions with the
// contraction rules
//   (A box B) : C = A C B^T,  (A (x) B) : C = A (C : B),  C : B = sum C_ij B_ji,
//   (A box a) : B = A (B^T a), (A (x) a) : B = A (B a),
//   (A box a) b = (A b) (x) a, (A (x) a) b = A (a . b),
// and no reference to the block formulas.
struct FullIndexLaw {
    double C[3][3][3][3] = {};  // (C : S)_ij = sum_kl C_ijkl S_lk
    double X[3][3][3] = {};     // (X : S)_i = sum_jk X_ijk S_jk,  (X E)_ij = sum_k X_ijk E_k
    double eps[3][3] = {};

    explicit FullIndexLaw(const MaterialTIP& m) {
        double I[3][3] = {}, Ip[3][3] = {}, P[3][3] = {};
        const double ez[3] = {0.0, 0.0, 1.0};
        for (int i = 0; i < 3; ++i) I[i][i] = 1.0;
        Ip[0][0] = Ip[1][1] = 1.0;
        P[2][2] = 1.0;
        // A box B  ->  A_il B_jk ;  A (x) B  ->  A_ij B_kl
        auto add_box = [&](double c, double A[3][3], double B[3][3]) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) C[i][j][k][l] += c * A[i][l] * B[j][k];
        };
        auto add_dyad = [&](double c, double A[3][3], double B[3][3]) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) C[i][j][k][l] += c * A[i][j] * B[k][l];
        };
        add_box(2.0 * m.mu, Ip, Ip);
        add_dyad(m.lambda, Ip, Ip);
        add_box(m.alpha1, P, I);
        add_box(m.alpha1, I, P);
        add_dyad(m.alpha2, P, I);
        add_dyad(m.alpha2, I, P);
        add_dyad(2.0 * m.alpha3, P, P);

        // A box a -> A_ik a_j ;  A (x) a -> A_ij a_k ;  a (x) A -> a_i A_jk
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    X[i][j][k] += m.beta1 * Ip[i][j] * ez[k];
                    X[i][j][k] += m.beta2 * (Ip[i][k] * ez[j] + ez[i] * Ip[j][k]);
                    X[i][j][k] += m.beta3 * P[i][j] * ez[k];
                }
        for (int i = 0; i < 3; ++i) eps[i][i] = i < 2 ? m.gamma1 : m.gamma2;
    }

    void response(const double S[3][3], const double E[3], double T[3][3], double D[3]) const {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double t = 0.0;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) t += C[i][j][k][l] * S[l][k];
                for (int k = 0; k < 3; ++k) t += X[i][j][k] * E[k];
                T[i][j] = t;
            }
            double d = 0.0;
            for (int k = 0; k < 3; ++k) d += eps[i][k] * E[k];
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) d -= X[i][j][k] * S[j][k];
            D[i] = d;
        }
    }
};

inline void to_full(const BlockSymTensor& b, double S[3][3]) {
    S[0][0] = b.plane.xx;
    S[0][1] = S[1][0] = b.plane.xy;
    S[1][1] = b.plane.yy;
    S[0][2] = S[2][0] = b.shear.x;
    S[1][2] = S[2][1] = b.shear.y;
    S[2][2] = b.axial;
}

inline BlockSymTensor random_strain(std::mt19937_64& rng) {
    return {{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)},
            {uniform(rng, -1, 1), uniform(rng, -1, 1)},
            uniform(rng, -1, 1)};
}

inline BlockVec3 random_field(std::mt19937_64& rng) {
    return {{uniform(rng, -1, 1), uniform(rng, -1, 1)}, uniform(rng, -1, 1)};
}

// Largest relative disagreement between the block law and the full-index law.
inline double block_oracle_mismatch(const MaterialTIP& m, const BlockSymTensor& s, const BlockVec3& e) {
    const FullIndexLaw law(m);
    double S[3][3], T[3][3], D[3];
    const double E[3] = {e.plane.x, e.plane.y, e.axial};
    to_full(s, S);
    law.response(S, E, T, D);
    const BlockSymTensor t = stress(s, e, m);
    const BlockVec3 d = electric_displacement(s, e, m);
    double Tb[3][3];
    to_full(t, Tb);
    const double Db[3] = {d.plane.x, d.plane.y, d.axial};
    double scale_t = 0.0, scale_d = 0.0, diff_t = 0.0, diff_d = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            scale_t = std::max(scale_t, std::abs(T[i][j]));
            diff_t = std::max(diff_t, std::abs(T[i][j] - Tb[i][j]));
        }
        scale_d = std::max(scale_d, std::abs(D[i]));
        diff_d = std::max(diff_d, std::abs(D[i] - Db[i]));
    }
    return std::max(scale_t > 0 ? diff_t / scale_t : diff_t, scale_d > 0 ? diff_d / scale_d : diff_d);
}

}  // namespace support
