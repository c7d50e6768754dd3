/*
 * Copyright 2026 The twistlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "twistlab/grid.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace twistlab {

// Samples of a convolution kernel on the difference lattice
// {m h : |m| <= M-1}^{2n}. Differences of two cell-centred points are
// integer multiples of h, so this is exactly the set of offsets z - w that
// a twisted convolution on the grid visits.
struct KernelSamples {
    Grid grid;
    int D = 0;  // 2M - 1 offsets per axis
    std::vector<cplx> values;

    std::size_t offset_index(std::span<const int> m) const;
    const cplx& at(std::span<const int> m) const { return values[offset_index(m)]; }
};

// Kernel sampled from a closed form; fn receives the 2n real offset coordinates.
KernelSamples kernel_from_function(const Grid& grid, const std::function<cplx(const double*)>& fn);

// Kernel from grid samples: a band-limited half-cell shift moves the
// samples onto the difference lattice; offsets outside the box are zero.
KernelSamples kernel_from_samples(const GridFunction& g);

enum class ConvMode { Direct, Fast };

// Reference quadrature: every (z, w) pair with the phase evaluated directly.
GridFunction twisted_conv_direct(const GridFunction& f, const KernelSamples& g);
GridFunction twisted_conv_direct(const GridFunction& f, const GridFunction& g);

// FFT path (n = 1); falls back to direct otherwise.
GridFunction twisted_conv_fast(const GridFunction& f, const KernelSamples& g, int workers = 0);
GridFunction twisted_conv_fast(const GridFunction& f, const GridFunction& g, int workers = 0);

GridFunction twisted_conv(const GridFunction& f, const KernelSamples& g, ConvMode mode = ConvMode::Fast);

// Convolution plan for a fixed left factor f: the modulated row spectra are
// computed once and reused for every kernel. This is the workhorse behind
// spectral projections and propagators, which convolve one input against
// many kernels.
class ConvPlan {
public:
    explicit ConvPlan(const GridFunction& f, ConvMode mode = ConvMode::Fast, int workers = 0);
    ~ConvPlan();
    ConvPlan(const ConvPlan&) = delete;
    ConvPlan& operator=(const ConvPlan&) = delete;

    const Grid& grid() const;
    ConvMode mode() const;
    std::size_t workspace_bytes() const;

    GridFunction apply(const KernelSamples& g) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace twistlab
