// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace oobsim::fft {
namespace {

std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

class Plan
{
  public:
    Plan(std::size_t n, int sign) : n_(n)
    {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        if (in_ == nullptr || out_ == nullptr)
            throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, sign, FFTW_ESTIMATE);
        if (plan_ == nullptr)
            throw std::runtime_error("fftw: plan creation failed");
    }
    Plan(const Plan &) = delete;
    Plan &operator=(const Plan &) = delete;
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    void execute(std::span<const Complex> in, std::span<Complex> out)
    {
        // New-array execution needs the planned alignment and distinct buffers; the complex DFT
        // leaves its input untouched.
        auto *src = reinterpret_cast<fftw_complex *>(const_cast<Complex *>(in.data()));
        auto *dst = reinterpret_cast<fftw_complex *>(out.data());
        if (src != dst && fftw_alignment_of(reinterpret_cast<double *>(src)) == fftw_alignment_of(in_[0]) &&
            fftw_alignment_of(reinterpret_cast<double *>(dst)) == fftw_alignment_of(out_[0])) {
            fftw_execute_dft(plan_, src, dst);
            return;
        }
        std::copy(in.begin(), in.end(), reinterpret_cast<Complex *>(in_));
        fftw_execute(plan_);
        const auto *res = reinterpret_cast<const Complex *>(out_);
        std::copy(res, res + n_, out.begin());
    }

  private:
    std::size_t n_;
    fftw_complex *in_ = nullptr;
    fftw_complex *out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

Plan &plan_for(std::size_t n, int sign)
{
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<Plan>> cache;
    auto &slot = cache[{n, sign}];
    if (!slot)
        slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

void check_sizes(std::span<const Complex> in, std::span<Complex> out)
{
    if (in.size() != out.size())
        throw std::invalid_argument("fft: input and output lengths differ");
}

} // namespace

void forward(std::span<const Complex> in, std::span<Complex> out)
{
    check_sizes(in, out);
    if (in.empty())
        return;
    plan_for(in.size(), FFTW_FORWARD).execute(in, out);
}

void inverse(std::span<const Complex> in, std::span<Complex> out)
{
    check_sizes(in, out);
    if (in.empty())
        return;
    plan_for(in.size(), FFTW_BACKWARD).execute(in, out);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto &v : out)
        v *= scale;
}

ComplexVector forward(std::span<const Complex> in)
{
    ComplexVector out(in.size());
    forward(in, out);
    return out;
}

ComplexVector inverse(std::span<const Complex> in)
{
    ComplexVector out(in.size());
    inverse(in, out);
    return out;
}

} // namespace oobsim::fft
