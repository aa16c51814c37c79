// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The cfmimo authors
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

#include "cfmimo/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfmimo {

namespace {

bool inside(Point p, double side)
{
    return p.x >= 0.0 && p.x < side && p.y >= 0.0 && p.y < side;
}

}  // namespace

void Deployment::validate() const
{
    if (!(side > 0.0))
        throw std::invalid_argument("deployment side must be positive");
    if (aps.empty() || ues.empty())
        throw std::invalid_argument("deployment needs at least one AP and one UE");
    for (const auto& p : aps)
        if (!inside(p, side))
            throw std::invalid_argument("AP position outside the deployment area");
    for (const auto& p : ues)
        if (!inside(p, side))
            throw std::invalid_argument("UE position outside the deployment area");
}

std::vector<Point> place_uniform(int count, double side, Rng& rng)
{
    if (count < 1)
        throw std::invalid_argument("place_uniform: count must be >= 1, got " + std::to_string(count));
    if (!(side > 0.0))
        throw std::invalid_argument("place_uniform: side must be positive");

    std::uniform_real_distribution<double> coord(0.0, side);
    // uniform_real_distribution may round up to `side` itself
    auto draw = [&] {
        double v = coord(rng);
        return v < side ? v : std::nextafter(side, 0.0);
    };

    std::vector<Point> points(static_cast<std::size_t>(count));
    for (auto& p : points) {
        p.x = draw();
        p.y = draw();
    }
    return points;
}

double torus_distance(Point p, Point q, double side)
{
    if (!(side > 0.0))
        throw std::invalid_argument("torus_distance: side must be positive");
    if (!inside(p, side) || !inside(q, side))
        throw std::invalid_argument("torus_distance: point outside [0, side)^2");

    double dx = std::abs(p.x - q.x);
    double dy = std::abs(p.y - q.y);
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
    return std::hypot(dx, dy);
}

Deployment deploy_uniform(int num_aps, int num_ues, double side, Rng& rng)
{
    Deployment dep;
    dep.side = side;
    dep.aps = place_uniform(num_aps, side, rng);
    dep.ues = place_uniform(num_ues, side, rng);
    return dep;
}

Eigen::MatrixXd distance_matrix(const Deployment& dep)
{
    dep.validate();
    Eigen::MatrixXd d(dep.num_aps(), dep.num_ues());
    for (int m = 0; m < dep.num_aps(); ++m)
        for (int k = 0; k < dep.num_ues(); ++k)
            d(m, k) = torus_distance(dep.aps[m], dep.ues[k], dep.side);
    return d;
}

}  // namespace cfmimo
