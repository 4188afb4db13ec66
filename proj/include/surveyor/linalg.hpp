#pragma once

#include <array>
#include <cmath>

#include "surveyor/geometry.hpp"

namespace surveyor {

struct SymEigen3 {
    std::array<double, 3> values;  // ascending
    std::array<Vec3, 3> vectors;   // matching order, unit length
};

// Jacobi eigendecomposition of a symmetric 3x3 matrix given as
// [xx, xy, xz; xy, yy, yz; xz, yz, zz].
inline SymEigen3 sym3_eigen(double xx, double xy, double xz, double yy, double yz,
                            double zz) {
    double a[3][3] = {{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }

    SymEigen3 out;
    int order[3] = {0, 1, 2};
    const double ev[3] = {a[0][0], a[1][1], a[2][2]};
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (ev[order[j]] < ev[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i < 3; ++i) {
        const int k = order[i];
        out.values[i] = ev[k];
        out.vectors[i] = Vec3{v[0][k], v[1][k], v[2][k]}.normalized();
    }
    return out;
}

}  // namespace surveyor
