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

#include "twistlab/conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace twistlab {

namespace {

std::mutex g_fftw_mutex;

// FFTW plans for one transform length, shared by all threads through the
// new-array execute interface.
struct FftPair {
    int length = 0;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit FftPair(int n) : length(n) {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        auto* buf = fftw_alloc_complex(n);
        forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(buf);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    void run(fftw_plan plan, cplx* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan, p, p);
    }
};

// Scratch buffer with FFTW alignment.
struct AlignedBuffer {
    cplx* data = nullptr;
    explicit AlignedBuffer(std::size_t n) {
        data = reinterpret_cast<cplx*>(fftw_alloc_complex(n));
    }
    ~AlignedBuffer() { fftw_free(data); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
};

int resolve_workers(int workers) { return workers > 0 ? workers : default_workers(); }

}  // namespace

std::size_t KernelSamples::offset_index(std::span<const int> m) const {
    const int shift = grid.M - 1;
    std::size_t idx = 0;
    for (int a = 0; a < grid.axes(); ++a) idx = idx * D + (m[a] + shift);
    return idx;
}

KernelSamples kernel_from_function(const Grid& grid, const std::function<cplx(const double*)>& fn) {
    KernelSamples k;
    k.grid = grid;
    k.D = 2 * grid.M - 1;
    const int A = grid.axes();
    std::size_t total = 1;
    for (int a = 0; a < A; ++a) total *= k.D;
    k.values.resize(total);
    std::vector<double> u(A);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        for (int a = A - 1; a >= 0; --a) {
            u[a] = (static_cast<int>(rem % k.D) - (grid.M - 1)) * grid.h;
            rem /= k.D;
        }
        k.values[i] = fn(u.data());
    }
    return k;
}

KernelSamples kernel_from_samples(const GridFunction& g) {
    const Grid& grid = g.grid;
    const int M = grid.M;
    const int A = grid.axes();
    std::vector<cplx> work = g.values;
    FftPair fft(M);
    AlignedBuffer buf(M);
    // Shift by -h/2 along every axis: G_i = g(x_i - h/2). The Nyquist
    // mode is dropped since its symmetric shift factor is cos(pi/2) = 0.
    std::vector<cplx> factor(M);
    for (int k = 0; k < M; ++k) {
        const int kk = k < M / 2 ? k : k - M;
        factor[k] = (k == M / 2) ? cplx(0.0, 0.0) : std::polar(1.0 / M, -kPi * kk / M);
    }
    for (int a = 0; a < A; ++a) {
        const std::size_t stride = grid.stride(a);
        const std::size_t lines = grid.size() / M;
        for (std::size_t line = 0; line < lines; ++line) {
            const std::size_t base = (line / stride) * stride * M + line % stride;
            for (int i = 0; i < M; ++i) buf.data[i] = work[base + i * stride];
            fft.run(fft.forward, buf.data);
            for (int i = 0; i < M; ++i) buf.data[i] *= factor[i];
            fft.run(fft.backward, buf.data);
            for (int i = 0; i < M; ++i) work[base + i * stride] = buf.data[i];
        }
    }
    KernelSamples k;
    k.grid = grid;
    k.D = 2 * M - 1;
    std::size_t total = 1;
    for (int a = 0; a < A; ++a) total *= k.D;
    k.values.assign(total, cplx(0.0, 0.0));
    // Grid index i sits at offset (i - M/2) h after the shift.
    std::vector<int> m(A);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::size_t rem = i;
        for (int a = A - 1; a >= 0; --a) {
            m[a] = static_cast<int>(rem % M) - M / 2;
            rem /= M;
        }
        k.values[k.offset_index(m)] = work[i];
    }
    return k;
}

GridFunction twisted_conv_direct(const GridFunction& f, const KernelSamples& g) {
    const Grid& grid = f.grid;
    if (!(grid == g.grid)) throw PreconditionError("twisted_conv_direct: mismatched grids");
    const int A = grid.axes();
    const int M = grid.M;
    const std::size_t P = grid.size();
    std::vector<int> idx(P * A);
    std::vector<double> pts(P * A);
    for (std::size_t i = 0; i < P; ++i) {
        std::size_t rem = i;
        for (int a = A - 1; a >= 0; --a) {
            idx[i * A + a] = static_cast<int>(rem % M);
            rem /= M;
        }
        grid.point(i, &pts[i * A]);
    }
    std::vector<std::size_t> nz;
    for (std::size_t w = 0; w < P; ++w) {
        if (f[w] != cplx(0.0, 0.0)) nz.push_back(w);
    }
    GridFunction out(grid);
    const double vol = grid.cell_volume();
    parallel_for(P, default_workers(), [&](std::size_t z) {
        std::vector<int> m(A);
        cplx acc(0.0, 0.0);
        for (std::size_t w : nz) {
            for (int a = 0; a < A; ++a) m[a] = idx[z * A + a] - idx[w * A + a];
            const double phase = 0.5 * symplectic(&pts[z * A], &pts[w * A], grid.n);
            acc += f[w] * g.at(m) * std::polar(1.0, phase);
        }
        out[z] = acc * vol;
    });
    return out;
}

GridFunction twisted_conv_direct(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw PreconditionError("twisted_conv_direct: mismatched grids");
    return twisted_conv_direct(f, kernel_from_samples(g));
}

struct ConvPlan::Impl {
    GridFunction f;
    ConvMode mode = ConvMode::Fast;
    int workers = 1;
    int M = 0;
    int N2 = 0;
    std::unique_ptr<FftPair> fft;
    // fhat[(b * M + d) * N2 + k]: spectrum of f(., d) exp((i/2) y_b v_c).
    std::vector<cplx> fhat;
    // outer[a * M + d] = exp(-(i/2) x_a v'_d).
    std::vector<cplx> outer;
};

ConvPlan::ConvPlan(const GridFunction& f, ConvMode mode, int workers) : impl_(std::make_unique<Impl>()) {
    impl_->f = f;
    impl_->mode = mode;
    impl_->workers = resolve_workers(workers);
    const Grid& grid = f.grid;
    if (mode == ConvMode::Fast && grid.n != 1) {
        warn("twisted convolution: fast path needs n = 1; using direct quadrature");
        impl_->mode = ConvMode::Direct;
    }
    if (impl_->mode == ConvMode::Direct) return;
    const int M = grid.M;
    const int N2 = 2 * M;
    impl_->M = M;
    impl_->N2 = N2;
    impl_->fft = std::make_unique<FftPair>(N2);
    impl_->fhat.assign(static_cast<std::size_t>(M) * M * N2, cplx(0.0, 0.0));
    impl_->outer.resize(static_cast<std::size_t>(M) * M);
    for (int a = 0; a < M; ++a) {
        for (int d = 0; d < M; ++d) {
            impl_->outer[a * M + d] = std::polar(1.0, -0.5 * grid.coord(a) * grid.coord(d));
        }
    }
    std::vector<cplx> inner(static_cast<std::size_t>(M) * M);
    for (int b = 0; b < M; ++b) {
        for (int c = 0; c < M; ++c) inner[b * M + c] = std::polar(1.0, 0.5 * grid.coord(b) * grid.coord(c));
    }
    const FftPair& fft = *impl_->fft;
    parallel_for(M, impl_->workers, [&](std::size_t b) {
        AlignedBuffer buf(N2);
        const cplx* mod = inner.data() + b * M;
        for (int d = 0; d < M; ++d) {
            for (int c = 0; c < M; ++c) buf.data[c] = f[c * M + d] * mod[c];
            for (int c = M; c < N2; ++c) buf.data[c] = 0.0;
            fft.run(fft.forward, buf.data);
            std::copy(buf.data, buf.data + N2, impl_->fhat.begin() + (b * M + d) * N2);
        }
    });
}

ConvPlan::~ConvPlan() = default;

const Grid& ConvPlan::grid() const { return impl_->f.grid; }

ConvMode ConvPlan::mode() const { return impl_->mode; }

std::size_t ConvPlan::workspace_bytes() const {
    return (impl_->fhat.size() + impl_->outer.size()) * sizeof(cplx);
}

GridFunction ConvPlan::apply(const KernelSamples& g) const {
    const Grid& grid = impl_->f.grid;
    if (!(grid == g.grid)) throw PreconditionError("ConvPlan::apply: mismatched grids");
    if (impl_->mode == ConvMode::Direct) return twisted_conv_direct(impl_->f, g);
    const int M = impl_->M;
    const int N2 = impl_->N2;
    const int D = g.D;
    const FftPair& fft = *impl_->fft;
    // Column spectra of the kernel, one per y-offset e = b - d.
    std::vector<cplx> ghat(static_cast<std::size_t>(D) * N2);
    parallel_for(D, impl_->workers, [&](std::size_t e) {
        AlignedBuffer buf(N2);
        for (int k = 0; k < N2; ++k) buf.data[k] = 0.0;
        for (int m = -(M - 1); m <= M - 1; ++m) {
            buf.data[(m + N2) % N2] = g.values[static_cast<std::size_t>(m + M - 1) * D + e];
        }
        fft.run(fft.forward, buf.data);
        std::copy(buf.data, buf.data + N2, ghat.begin() + e * N2);
    });
    GridFunction out(grid);
    const double scale = grid.cell_volume() / N2;
    parallel_for(M, impl_->workers, [&](std::size_t b) {
        AlignedBuffer buf(N2);
        std::vector<cplx> acc(M, cplx(0.0, 0.0));
        for (int d = 0; d < M; ++d) {
            const cplx* fh = impl_->fhat.data() + (b * M + d) * N2;
            const cplx* gh = ghat.data() + static_cast<std::size_t>(static_cast<int>(b) - d + M - 1) * N2;
            for (int k = 0; k < N2; ++k) buf.data[k] = fh[k] * gh[k];
            fft.run(fft.backward, buf.data);
            for (int a = 0; a < M; ++a) acc[a] += impl_->outer[a * M + d] * buf.data[a];
        }
        for (int a = 0; a < M; ++a) out[a * M + b] = acc[a] * scale;
    });
    return out;
}

GridFunction twisted_conv_fast(const GridFunction& f, const KernelSamples& g, int workers) {
    return ConvPlan(f, ConvMode::Fast, workers).apply(g);
}

GridFunction twisted_conv_fast(const GridFunction& f, const GridFunction& g, int workers) {
    if (!(f.grid == g.grid)) throw PreconditionError("twisted_conv_fast: mismatched grids");
    return twisted_conv_fast(f, kernel_from_samples(g), workers);
}

GridFunction twisted_conv(const GridFunction& f, const KernelSamples& g, ConvMode mode) {
    return mode == ConvMode::Fast ? twisted_conv_fast(f, g) : twisted_conv_direct(f, g);
}

}  // namespace twistlab
