// Copyright 2026 The bsa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bsa/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace bsa {

namespace {

// Work is always split into this fixed number of chunks, whatever the
// worker count, so results are bit-identical for any thread setting.
constexpr int kChunks = 8;
constexpr int kTile = 64;

inline void cmadd(cplx& out, const cplx& a, const cplx& b) {
    // out += a*b spelled out on the real parts; keeps the hot loops free
    // of the checked library multiply.
    out += cplx(a.real() * b.real() - a.imag() * b.imag(),
                a.real() * b.imag() + a.imag() * b.real());
}

/// Runs fn(chunk) for chunk in [0, chunks) on a small fixed crew.
/// Chunk claims are tagged with the job generation, so a late worker can
/// never execute chunks of a job that has already completed.
class WorkerPool {
  public:
    explicit WorkerPool(int threads) : threads_(std::max(threads, 1)) {
        for (int i = 0; i < threads_ - 1; ++i) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }
    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stop_ = true;
        }
        start_cv_.notify_all();
        for (auto& w : workers_) w.join();
    }

    void run(int chunks, const std::function<void(int)>& fn) {
        if (threads_ == 1 || chunks <= 1) {
            for (int c = 0; c < chunks; ++c) fn(c);
            return;
        }
        long gen;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            fn_ = &fn;
            chunks_ = chunks;
            pending_.store(chunks, std::memory_order_relaxed);
            gen = ++generation_;
            state_.store(gen << kIndexBits, std::memory_order_release);
        }
        start_cv_.notify_all();
        work(gen, fn);
        std::unique_lock<std::mutex> lock(mutex_);
        done_cv_.wait(lock, [this] { return pending_.load(std::memory_order_acquire) == 0; });
        state_.store((gen << kIndexBits) | kIndexMask, std::memory_order_release);
        fn_ = nullptr;
    }

  private:
    static constexpr int kIndexBits = 20;
    static constexpr long kIndexMask = (1L << kIndexBits) - 1;

    bool claim(long gen, int& chunk) {
        long cur = state_.load(std::memory_order_acquire);
        while (true) {
            if ((cur >> kIndexBits) != gen) return false;
            const long idx = cur & kIndexMask;
            if (idx >= chunks_) return false;
            if (state_.compare_exchange_weak(cur, (gen << kIndexBits) | (idx + 1),
                                             std::memory_order_acq_rel)) {
                chunk = static_cast<int>(idx);
                return true;
            }
        }
    }

    void work(long gen, const std::function<void(int)>& fn) {
        int chunk;
        while (claim(gen, chunk)) {
            fn(chunk);
            if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
                std::lock_guard<std::mutex> lock(mutex_);
                done_cv_.notify_all();
            }
        }
    }

    void worker_loop() {
        long seen = 0;
        while (true) {
            long gen;
            const std::function<void(int)>* fn = nullptr;
            {
                std::unique_lock<std::mutex> lock(mutex_);
                start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                gen = generation_;
                fn = fn_;
            }
            work(gen, *fn);
        }
    }

    int threads_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable start_cv_, done_cv_;
    const std::function<void(int)>* fn_ = nullptr;
    std::atomic<long> state_{0};
    std::atomic<int> pending_{0};
    int chunks_ = 0;
    long generation_ = 0;
    bool stop_ = false;
};

struct RowRange {
    int lo, hi;
};

RowRange chunk_rows(int n, int chunk) {
    const int lo = static_cast<int>(static_cast<long>(n) * chunk / kChunks);
    const int hi = static_cast<int>(static_cast<long>(n) * (chunk + 1) / kChunks);
    return {lo, hi};
}

/// H(t) compiled to one CSR structure with per-term value updates.
/// Stored values are already scaled by -i, so apply() computes -i H psi.
class CompiledHamiltonian {
  public:
    CompiledHamiltonian(const TimeDependentHamiltonian& h,
                        const std::vector<double>& extra_diagonal) {
        n_ = h.space->dim();
        struct Slot {
            int row, col;
        };
        const cplx mi(0.0, -1.0);
        std::vector<Slot> slots;
        auto add_pattern = [&](const SparseOperator& op) {
            for (const auto& e : op.entries()) slots.push_back({e.row, e.col});
        };
        add_pattern(h.constant);
        for (const auto& term : h.terms) add_pattern(term.pattern);
        if (!extra_diagonal.empty()) {
            for (int i = 0; i < n_; ++i) slots.push_back({i, i});
        }
        auto less = [](const Slot& a, const Slot& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        };
        std::sort(slots.begin(), slots.end(), less);
        slots.erase(std::unique(slots.begin(), slots.end(),
                                [](const Slot& a, const Slot& b) {
                                    return a.row == b.row && a.col == b.col;
                                }),
                    slots.end());
        row_ptr_.assign(static_cast<size_t>(n_) + 1, 0);
        col_.resize(slots.size());
        for (size_t k = 0; k < slots.size(); ++k) {
            ++row_ptr_[static_cast<size_t>(slots[k].row) + 1];
            col_[k] = slots[k].col;
        }
        for (size_t i = 0; i < static_cast<size_t>(n_); ++i) row_ptr_[i + 1] += row_ptr_[i];

        auto slot_of = [&](int row, int col) {
            auto it = std::lower_bound(slots.begin(), slots.end(), Slot{row, col}, less);
            return static_cast<size_t>(it - slots.begin());
        };
        base_.assign(slots.size(), cplx(0.0, 0.0));
        for (const auto& e : h.constant.entries()) base_[slot_of(e.row, e.col)] += mi * e.val;
        if (!extra_diagonal.empty()) {
            for (int i = 0; i < n_; ++i) {
                base_[slot_of(i, i)] += cplx(extra_diagonal[static_cast<size_t>(i)], 0.0);
            }
        }
        for (const auto& term : h.terms) {
            TermMap map;
            map.coeff = term.coeff;
            for (const auto& e : term.pattern.entries()) {
                map.slot.push_back(slot_of(e.row, e.col));
                map.scaled.push_back(mi * e.val);
            }
            terms_.push_back(std::move(map));
        }
        vals_.resize(slots.size());
    }

    void eval(double t) {
        std::copy(base_.begin(), base_.end(), vals_.begin());
        for (const auto& term : terms_) {
            const double c = term.coeff(t);
            if (c == 0.0) continue;
            for (size_t k = 0; k < term.slot.size(); ++k) {
                vals_[term.slot[k]] += c * term.scaled[k];
            }
        }
    }

    /// out = (-i H) psi at the last eval() time.
    void apply(const Vec& psi, Vec& out) const {
        for (int i = 0; i < n_; ++i) {
            cplx acc(0.0, 0.0);
            for (size_t k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k) {
                cmadd(acc, vals_[k], psi[col_[k]]);
            }
            out[i] = acc;
        }
    }

    /// Rows [lo, hi) of (-i H - K/2) rho at the last eval() time.
    void apply_left(const Mat& rho, Mat& out, int lo, int hi) const {
        for (int i = lo; i < hi; ++i) {
            auto row = out.row(i);
            const size_t b = row_ptr_[static_cast<size_t>(i)];
            const size_t e = row_ptr_[static_cast<size_t>(i) + 1];
            if (b == e) {
                row.setZero();
                continue;
            }
            row.noalias() = vals_[b] * rho.row(col_[b]);
            for (size_t k = b + 1; k < e; ++k) {
                row.noalias() += vals_[k] * rho.row(col_[k]);
            }
        }
    }

  private:
    struct TermMap {
        std::vector<size_t> slot;
        std::vector<cplx> scaled;
        std::function<double(double)> coeff;
    };
    int n_ = 0;
    std::vector<size_t> row_ptr_;
    std::vector<int> col_;
    std::vector<cplx> base_;
    std::vector<cplx> vals_;
    std::vector<TermMap> terms_;
};

/// A collapse operator recognized as a local operator on one tensor factor:
/// entries (o*period + a*inner + q, o*period + b*inner + q) with a fixed
/// value per (a, b) pair. L rho L^+ then reduces to shifted block adds.
struct LocalJump {
    int inner = 1;   // stride of the factor
    int period = 1;  // inner * factor dimension
    int outer = 1;   // total dim / period
    struct LocalEntry {
        int row_off, col_off;  // level * inner
        cplx val;
    };
    std::vector<LocalEntry> entries;
};

std::optional<LocalJump> detect_local(const SparseOperator& op) {
    const auto& space = *op.space();
    const int dim = space.dim();
    for (int k = 0; k < space.subsystem_count(); ++k) {
        const int s = space.stride(k);
        const int d = space.subsystem_dim(k);
        const int period = s * d;
        const int outer = dim / period;
        std::map<std::pair<int, int>, cplx> locals;
        std::map<std::pair<int, int>, long> counts;
        bool ok = true;
        for (const auto& e : op.entries()) {
            if (e.row % s != e.col % s || e.row / period != e.col / period) {
                ok = false;
                break;
            }
            const int a = (e.row / s) % d;
            const int b = (e.col / s) % d;
            auto [it, inserted] = locals.emplace(std::make_pair(a, b), e.val);
            if (!inserted && it->second != e.val) {
                ok = false;
                break;
            }
            ++counts[{a, b}];
        }
        if (!ok || locals.empty()) continue;
        for (const auto& [key, c] : counts) {
            if (c != static_cast<long>(outer) * s) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        LocalJump j;
        j.inner = s;
        j.period = period;
        j.outer = outer;
        for (const auto& [key, v] : locals) j.entries.push_back({key.first * s, key.second * s, v});
        return j;
    }
    return std::nullopt;
}

/// Fallback representation: maximal diagonal-shifted runs of equal value.
struct JumpRuns {
    struct Run {
        int row, col, len;
        cplx val;
    };
    std::vector<Run> runs;
};

JumpRuns make_runs(const SparseOperator& op) {
    JumpRuns j;
    const auto& es = op.entries();
    size_t k = 0;
    while (k < es.size()) {
        JumpRuns::Run run{es[k].row, es[k].col, 1, es[k].val};
        while (k + run.len < es.size()) {
            const auto& nx = es[k + static_cast<size_t>(run.len)];
            if (nx.row == run.row + run.len && nx.col == run.col + run.len && nx.val == run.val) {
                ++run.len;
            } else {
                break;
            }
        }
        k += static_cast<size_t>(run.len);
        j.runs.push_back(run);
    }
    return j;
}

/// Time-independent data of the master-equation right-hand side
///   rho' = A rho + (A rho)^+ + M o rho + sum_p L_p rho L_p^+
/// with A = -i H(t) (minus K/2 on the diagonal when no mask is used),
/// M the combined dephasing + anticommutator mask, o elementwise.
class LindbladKernel {
  public:
    LindbladKernel(const TimeDependentHamiltonian& h, const std::vector<SparseOperator>& lops,
                   WorkerPool& pool)
        : n_(h.space->dim()), pool_(pool) {
        std::vector<double> k_diag(static_cast<size_t>(n_), 0.0);
        for (const auto& l : lops) {
            SparseOperator ktop = l.dagger() * l;
            if (!ktop.is_diagonal()) {
                throw std::invalid_argument(
                    "collapse operators with non-diagonal L^+L are not supported");
            }
            for (const auto& e : ktop.entries()) k_diag[static_cast<size_t>(e.row)] += e.val.real();
        }

        std::vector<const SparseOperator*> jump_ops;
        std::vector<const SparseOperator*> mask_ops;
        for (const auto& l : lops) {
            if (l.nnz() == 0) continue;
            bool real_diagonal = l.is_diagonal();
            if (real_diagonal) {
                for (const auto& e : l.entries()) {
                    if (e.val.imag() != 0.0) {
                        real_diagonal = false;
                        break;
                    }
                }
            }
            (real_diagonal ? mask_ops : jump_ops).push_back(&l);
        }

        use_mask_ = !mask_ops.empty();
        if (use_mask_) {
            mask_.setZero(n_, n_);
            for (const SparseOperator* l : mask_ops) {
                Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
                for (const auto& e : l->entries()) d[e.row] = e.val.real();
                mask_.noalias() += d * d.transpose();
            }
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < n_; ++j) {
                    mask_(i, j) -= 0.5 * (k_diag[static_cast<size_t>(i)] + k_diag[static_cast<size_t>(j)]);
                }
            }
            ham_ = std::make_unique<CompiledHamiltonian>(h, std::vector<double>{});
        } else {
            std::vector<double> extra;
            if (std::any_of(k_diag.begin(), k_diag.end(), [](double v) { return v != 0.0; })) {
                extra.resize(static_cast<size_t>(n_));
                for (int i = 0; i < n_; ++i) extra[static_cast<size_t>(i)] = -0.5 * k_diag[static_cast<size_t>(i)];
            }
            ham_ = std::make_unique<CompiledHamiltonian>(h, extra);
        }

        for (const SparseOperator* l : jump_ops) {
            if (auto local = detect_local(*l)) {
                local_jumps_.push_back(*local);
            } else {
                run_jumps_.push_back(make_runs(*l));
            }
        }

        // upper-triangle tile list for the symmetrization passes
        for (int i0 = 0; i0 < n_; i0 += kTile) {
            for (int j0 = i0; j0 < n_; j0 += kTile) tiles_.push_back({i0, j0});
        }
    }

    bool threaded() const { return true; }

    /// out = rhs(t, rho). rho must be exactly Hermitian; the output then is.
    void rhs(double t, const Mat& rho, Mat& out) {
        ham_->eval(t);
        pool_.run(kChunks, [&](int chunk) {
            const RowRange r = chunk_rows(n_, chunk);
            ham_->apply_left(rho, out, r.lo, r.hi);
        });

        // out <- out + out^+ (+ mask o rho), in place over tile pairs; each
        // (i,j)/(j,i) element pair is read before either side is written
        const int tiles_per_chunk = static_cast<int>((tiles_.size() + kChunks - 1) / kChunks);
        pool_.run(kChunks, [&](int chunk) {
            const size_t begin = static_cast<size_t>(chunk) * static_cast<size_t>(tiles_per_chunk);
            const size_t end = std::min(tiles_.size(), begin + static_cast<size_t>(tiles_per_chunk));
            for (size_t tk = begin; tk < end; ++tk) {
                const int i0 = tiles_[tk].first, j0 = tiles_[tk].second;
                const int ih = std::min(kTile, n_ - i0), jh = std::min(kTile, n_ - j0);
                for (int i = i0; i < i0 + ih; ++i) {
                    const int jlo = (j0 == i0) ? i : j0;
                    if (use_mask_) {
                        for (int j = jlo; j < j0 + jh; ++j) {
                            const cplx v = out(i, j) + std::conj(out(j, i)) +
                                           mask_(i, j) * rho(i, j);
                            out(i, j) = v;
                            if (j != i) out(j, i) = std::conj(v);
                        }
                    } else {
                        for (int j = jlo; j < j0 + jh; ++j) {
                            const cplx v = out(i, j) + std::conj(out(j, i));
                            out(i, j) = v;
                            if (j != i) out(j, i) = std::conj(v);
                        }
                    }
                }
            }
        });

        if (!local_jumps_.empty() || !run_jumps_.empty()) {
            pool_.run(kChunks, [&](int chunk) {
                const RowRange r = chunk_rows(n_, chunk);
                for (const auto& j : local_jumps_) apply_local(j, rho, out, r.lo, r.hi);
                for (const auto& j : run_jumps_) apply_runs(j, rho, out, r.lo, r.hi);
            });
        }
    }

    WorkerPool& pool() { return pool_; }
    int dim() const { return n_; }
    const std::vector<std::pair<int, int>>& tiles() const { return tiles_; }

  private:
    void apply_local(const LocalJump& j, const Mat& rho, Mat& out, int row_lo, int row_hi) const {
        for (const auto& e1 : j.entries) {
            for (const auto& e2 : j.entries) {
                const cplx w = e1.val * std::conj(e2.val);
                for (int o1 = 0; o1 < j.outer; ++o1) {
                    const int dst_base = o1 * j.period + e1.row_off;
                    if (dst_base + j.inner <= row_lo || dst_base >= row_hi) continue;
                    const int src_base = o1 * j.period + e1.col_off;
                    const int q_lo = std::max(0, row_lo - dst_base);
                    const int q_hi = std::min(j.inner, row_hi - dst_base);
                    for (int q1 = q_lo; q1 < q_hi; ++q1) {
                        const cplx* src =
                            rho.data() + static_cast<size_t>(src_base + q1) * static_cast<size_t>(n_);
                        cplx* dst =
                            out.data() + static_cast<size_t>(dst_base + q1) * static_cast<size_t>(n_);
                        if (j.inner == 1) {
                            const cplx* s = src + e2.col_off;
                            cplx* d = dst + e2.row_off;
                            for (int o2 = 0; o2 < j.outer; ++o2) {
                                cmadd(*d, w, *s);
                                s += j.period;
                                d += j.period;
                            }
                        } else {
                            for (int o2 = 0; o2 < j.outer; ++o2) {
                                const cplx* s = src + o2 * j.period + e2.col_off;
                                cplx* d = dst + o2 * j.period + e2.row_off;
                                for (int q2 = 0; q2 < j.inner; ++q2) cmadd(d[q2], w, s[q2]);
                            }
                        }
                    }
                }
            }
        }
    }

    void apply_runs(const JumpRuns& j, const Mat& rho, Mat& out, int row_lo, int row_hi) const {
        for (const auto& r1 : j.runs) {
            const int q_lo = std::max(0, row_lo - r1.row);
            const int q_hi = std::min(r1.len, row_hi - r1.row);
            for (int q = q_lo; q < q_hi; ++q) {
                cplx* orow = out.data() + static_cast<size_t>(r1.row + q) * static_cast<size_t>(n_);
                const cplx* rrow =
                    rho.data() + static_cast<size_t>(r1.col + q) * static_cast<size_t>(n_);
                for (const auto& r2 : j.runs) {
                    const cplx w = r1.val * std::conj(r2.val);
                    const cplx* s = rrow + r2.col;
                    cplx* d = orow + r2.row;
                    for (int q2 = 0; q2 < r2.len; ++q2) cmadd(d[q2], w, s[q2]);
                }
            }
        }
    }

    int n_;
    WorkerPool& pool_;
    std::unique_ptr<CompiledHamiltonian> ham_;
    bool use_mask_ = false;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> mask_;
    std::vector<LocalJump> local_jumps_;
    std::vector<JumpRuns> run_jumps_;
    std::vector<std::pair<int, int>> tiles_;
};

/// acc (+)= w*k and, optionally, y = rho + c*k in one sweep. The scalars
/// are real, so the complex arrays are walked as flat double arrays.
void fused_combo(WorkerPool& pool, Mat& acc, double w, bool acc_assign, const Mat& k,
                 Mat* y, const Mat* rho, double c) {
    const long total = 2L * k.rows() * k.cols();
    pool.run(kChunks, [&](int chunk) {
        const long lo = total * chunk / kChunks;
        const long hi = total * (chunk + 1) / kChunks;
        const double* kd = reinterpret_cast<const double*>(k.data());
        double* accd = reinterpret_cast<double*>(acc.data());
        if (acc_assign) {
            if (y) {
                double* yd = reinterpret_cast<double*>(y->data());
                const double* rhod = reinterpret_cast<const double*>(rho->data());
                for (long i = lo; i < hi; ++i) {
                    const double kv = kd[i];
                    accd[i] = w * kv;
                    yd[i] = rhod[i] + c * kv;
                }
            } else {
                for (long i = lo; i < hi; ++i) accd[i] = w * kd[i];
            }
        } else {
            if (y) {
                double* yd = reinterpret_cast<double*>(y->data());
                const double* rhod = reinterpret_cast<const double*>(rho->data());
                for (long i = lo; i < hi; ++i) {
                    const double kv = kd[i];
                    accd[i] += w * kv;
                    yd[i] = rhod[i] + c * kv;
                }
            } else {
                for (long i = lo; i < hi; ++i) accd[i] += w * kd[i];
            }
        }
    });
}

/// rho += c*(acc + k_last), then symmetrize in place. Returns the largest
/// pre-symmetrization residual and the updated trace.
std::pair<double, double> update_and_hermitize(WorkerPool& pool,
                                               const std::vector<std::pair<int, int>>& tiles,
                                               Mat& rho, const Mat& acc, const Mat& k_last,
                                               double c) {
    const int n = static_cast<int>(rho.rows());
    std::array<double, kChunks> residuals{};
    std::array<double, kChunks> traces{};
    const int tiles_per_chunk = static_cast<int>((tiles.size() + kChunks - 1) / kChunks);
    pool.run(kChunks, [&](int chunk) {
        double residual = 0.0, trace = 0.0;
        const size_t begin = static_cast<size_t>(chunk) * static_cast<size_t>(tiles_per_chunk);
        const size_t end = std::min(tiles.size(), begin + static_cast<size_t>(tiles_per_chunk));
        for (size_t tk = begin; tk < end; ++tk) {
            const int i0 = tiles[tk].first, j0 = tiles[tk].second;
            const int ih = std::min(kTile, n - i0), jh = std::min(kTile, n - j0);
            for (int i = i0; i < i0 + ih; ++i) {
                if (j0 == i0) {
                    const cplx d = rho(i, i) + c * (acc(i, i) + k_last(i, i));
                    residual = std::max(residual, std::abs(d.imag()));
                    rho(i, i) = cplx(d.real(), 0.0);
                    trace += d.real();
                }
                const int jlo = (j0 == i0) ? i + 1 : j0;
                for (int j = jlo; j < j0 + jh; ++j) {
                    const cplx a = rho(i, j) + c * (acc(i, j) + k_last(i, j));
                    const cplx b = rho(j, i) + c * (acc(j, i) + k_last(j, i));
                    residual = std::max(residual, std::abs(b - std::conj(a)));
                    const cplx v = 0.5 * (a + std::conj(b));
                    rho(i, j) = v;
                    rho(j, i) = std::conj(v);
                }
            }
        }
        residuals[static_cast<size_t>(chunk)] = residual;
        traces[static_cast<size_t>(chunk)] = trace;
    });
    double residual = 0.0, trace = 0.0;
    for (int c2 = 0; c2 < kChunks; ++c2) {
        residual = std::max(residual, residuals[static_cast<size_t>(c2)]);
        trace += traces[static_cast<size_t>(c2)];
    }
    return {residual, trace};
}

struct SampleCursor {
    std::span<const double> times;
    size_t next = 0;

    bool due(double t, double slack) {
        return next < times.size() && times[next] <= t + slack;
    }
    void advance() { ++next; }
};

long resolve_steps(double t0, double t1, double dt, const char* what) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t1 > t0)) throw std::invalid_argument(std::string(what) + ": empty time span");
    const long steps = std::lround((t1 - t0) / dt);
    return std::max(steps, 1L);
}

}  // namespace

PureState evolve_schrodinger(const TimeDependentHamiltonian& h, const PureState& psi0,
                             double t0, double t1, const IntegratorConfig& cfg,
                             EvolutionStats* stats, std::span<const double> sample_times,
                             const std::function<void(double, const PureState&)>& on_sample) {
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("initial state is not normalized");
    }
    const long steps = resolve_steps(t0, t1, cfg.dt, "evolve_schrodinger");
    const double dt = (t1 - t0) / static_cast<double>(steps);
    CompiledHamiltonian ham(h, {});

    Vec psi = psi0.amplitudes();
    const int n = static_cast<int>(psi.size());
    Vec k(n), y(n), acc(n);
    EvolutionStats local;
    local.dt_used = dt;

    SampleCursor cursor{sample_times, 0};
    const double slack = 0.25 * dt;
    auto emit = [&](double t) {
        while (cursor.due(t, slack)) {
            if (on_sample) on_sample(t, PureState(psi0.space(), psi));
            cursor.advance();
        }
    };
    emit(t0);

    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        ham.eval(t);
        ham.apply(psi, k);  // k1
        acc = k;
        y = psi + (dt / 2) * k;
        ham.eval(t + dt / 2);
        ham.apply(y, k);  // k2
        acc += 2.0 * k;
        y = psi + (dt / 2) * k;
        ham.apply(y, k);  // k3, same midpoint coefficients
        acc += 2.0 * k;
        y = psi + dt * k;
        ham.eval(t + dt);
        ham.apply(y, k);  // k4
        acc += k;
        psi += (dt / 6) * acc;

        const double drift = std::abs(psi.norm() - 1.0);
        local.norm_drift = std::max(local.norm_drift, drift);
        if (drift > cfg.norm_abort) {
            throw IntegrationError(
                "norm drift " + std::to_string(drift) + " at t=" + std::to_string(t + dt) +
                " exceeds " + std::to_string(cfg.norm_abort) +
                "; the step dt=" + std::to_string(dt) + " is too coarse for this Hamiltonian");
        }
        emit(t0 + static_cast<double>(s + 1) * dt);
    }
    local.steps = steps;
    if (stats) *stats = local;
    return PureState(psi0.space(), std::move(psi));
}

DensityState evolve_lindblad(const TimeDependentHamiltonian& h,
                             const std::vector<SparseOperator>& lindblad_ops,
                             const DensityState& rho0, double t0, double t1,
                             const IntegratorConfig& cfg, EvolutionStats* stats,
                             std::span<const double> sample_times,
                             const std::function<void(double, const DensityState&)>& on_sample) {
    for (const auto& l : lindblad_ops) {
        if (!l.space()->same_structure(*h.space)) {
            throw std::invalid_argument("collapse operator space does not match H");
        }
    }
    const long steps = resolve_steps(t0, t1, cfg.dt, "evolve_lindblad");
    const double dt = (t1 - t0) / static_cast<double>(steps);
    WorkerPool pool(cfg.kernel_threads);
    LindbladKernel kernel(h, lindblad_ops, pool);

    Mat rho = rho0.matrix();
    {
        DensityState tmp(rho0.space(), rho);
        if (tmp.hermiticity_residual() > 1e-10) {
            throw std::invalid_argument("initial density matrix is not Hermitian within 1e-10");
        }
        tmp.hermitize();  // start bit-exactly Hermitian
        rho = tmp.matrix();
    }
    const int n = static_cast<int>(rho.rows());
    Mat k(n, n), y(n, n), acc(n, n);
    EvolutionStats local;
    local.dt_used = dt;
    const double trace0 = rho.trace().real();

    std::ofstream dump;
    if (!cfg.trajectory_dump.empty()) {
        dump.open(cfg.trajectory_dump);
        if (!dump) throw std::runtime_error("cannot open '" + cfg.trajectory_dump + "'");
        dump << "t,trace,min_eigenvalue";
        for (int idx : cfg.dump_populations) dump << ",pop" << idx;
        dump << '\n';
    }

    auto checkpoint = [&](double t) {
        DensityState state(rho0.space(), rho);
        double min_eig = std::numeric_limits<double>::quiet_NaN();
        if (cfg.check_positivity) {
            min_eig = state.min_eigenvalue();
            local.min_eigenvalue = std::min(local.min_eigenvalue, min_eig);
            if (min_eig < cfg.min_eig_abort) {
                throw IntegrationError("density matrix eigenvalue " + std::to_string(min_eig) +
                                       " at t=" + std::to_string(t) + " is below " +
                                       std::to_string(cfg.min_eig_abort) +
                                       " (dt=" + std::to_string(dt) + ")");
            }
        }
        if (dump.is_open()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.9g", t);
            dump << buf;
            std::snprintf(buf, sizeof(buf), ",%.9g", rho.trace().real());
            dump << buf;
            std::snprintf(buf, sizeof(buf), ",%.9g", min_eig);
            dump << buf;
            for (int idx : cfg.dump_populations) {
                std::snprintf(buf, sizeof(buf), ",%.9g", rho(idx, idx).real());
                dump << buf;
            }
            dump << '\n';
        }
        if (on_sample) on_sample(t, state);
    };

    SampleCursor cursor{sample_times, 0};
    const double slack = 0.25 * dt;
    auto emit = [&](double t) {
        bool hit = false;
        while (cursor.due(t, slack)) {
            hit = true;
            cursor.advance();
        }
        if (hit) checkpoint(t);
    };
    emit(t0);

    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        kernel.rhs(t, rho, k);  // k1
        fused_combo(pool, acc, 1.0, true, k, &y, &rho, dt / 2);
        kernel.rhs(t + dt / 2, y, k);  // k2
        fused_combo(pool, acc, 2.0, false, k, &y, &rho, dt / 2);
        kernel.rhs(t + dt / 2, y, k);  // k3
        fused_combo(pool, acc, 2.0, false, k, &y, &rho, dt);
        kernel.rhs(t + dt, y, k);  // k4

        const auto [residual, trace] =
            update_and_hermitize(pool, kernel.tiles(), rho, acc, k, dt / 6);
        local.hermiticity_residual = std::max(local.hermiticity_residual, residual);
        const double drift = std::abs(trace - trace0);
        local.trace_drift = std::max(local.trace_drift, drift);
        if (drift > cfg.trace_abort) {
            throw IntegrationError("trace drift " + std::to_string(drift) + " at t=" +
                                   std::to_string(t + dt) + " exceeds " +
                                   std::to_string(cfg.trace_abort) + " (dt=" +
                                   std::to_string(dt) + ")");
        }
        emit(t0 + static_cast<double>(s + 1) * dt);
    }
    local.steps = steps;
    if (stats) *stats = local;
    return DensityState(rho0.space(), std::move(rho));
}

}  // namespace bsa
