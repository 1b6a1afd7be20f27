// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>

#include "pxmap/error.h"
#include "pxmap/pstereo.h"

namespace pxmap {

NormalMap WoodhamSolve(const ImageStack &stack) {
    const int count = stack.count();
    if (count < 3)
        throw Error(Errc::RankDeficientLights,
                    "need at least 3 lights, got " + std::to_string(count));

    Eigen::MatrixXd all(count, 3);
    for (int j = 0; j < count; ++j) {
        const Direction &l = stack.lights()[j].direction;
        all.row(j) << l.x, l.y, l.z;
    }
    if (Eigen::FullPivLU<Eigen::MatrixXd>(all).rank() < 3)
        throw Error(Errc::RankDeficientLights, "light directions span fewer than 3 dimensions");

    std::vector<Eigen::Vector3d> dirs(count);
    std::vector<Rgb> inv_phi(count);
    for (int j = 0; j < count; ++j) {
        dirs[j] = all.row(j).transpose();
        inv_phi[j] = Rgb(1) / stack.lights()[j].brightness;
    }

    NormalMap out(stack.height(), stack.width());
    for (int r = 0; r < stack.height(); ++r) {
        for (int c = 0; c < stack.width(); ++c) {
            if (!stack.InMask(r, c)) continue;
            // Normal equations over the lit observations: (L^T L) g = L^T b.
            Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
            Eigen::Vector3d atb = Eigen::Vector3d::Zero();
            int used = 0;
            for (int j = 0; j < count; ++j) {
                double gray = (stack.At(j, r, c) * inv_phi[j]).Sum() / 3.0;
                if (gray == 0) continue;
                ata.noalias() += dirs[j] * dirs[j].transpose();
                atb.noalias() += gray * dirs[j];
                ++used;
            }
            if (used < 3) continue;
            Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
            if (lu.rank() < 3) continue;
            Eigen::Vector3d g = lu.solve(atb);
            double len = g.norm();
            if (!(len > 0) || !std::isfinite(len)) continue;
            out.Set(r, c, Vec3(g.x() / len, g.y() / len, g.z() / len));
        }
    }
    return out;
}

}  // namespace pxmap
