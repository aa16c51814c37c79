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

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfmimo/random.hpp"

namespace cfmimo {

struct Point {
    double x = 0.0;  // meters
    double y = 0.0;  // meters
};

/// AP and UE positions on a side x side square whose opposite edges are
/// identified (torus), so no node sits at a network edge.
struct Deployment {
    std::vector<Point> aps;
    std::vector<Point> ues;
    double side = 0.0;

    int num_aps() const { return static_cast<int>(aps.size()); }
    int num_ues() const { return static_cast<int>(ues.size()); }

    /// Throws std::invalid_argument if a coordinate leaves [0, side) or a set is empty.
    void validate() const;
};

/// `count` i.i.d. points, each coordinate uniform on [0, side).
std::vector<Point> place_uniform(int count, double side, Rng& rng);

/// Euclidean distance with per-axis wrap-around: each coordinate difference is
/// min(|dp|, side - |dp|). Equivalent to the nearest of the nine tiled copies.
double torus_distance(Point p, Point q, double side);

/// Draws APs first, then UEs, from the same stream.
Deployment deploy_uniform(int num_aps, int num_ues, double side, Rng& rng);

/// M x K matrix of wrap-around AP-UE distances in meters.
Eigen::MatrixXd distance_matrix(const Deployment& dep);

}  // namespace cfmimo
