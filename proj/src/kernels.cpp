#include "csent/kernels.hpp"

#include <algorithm>

#include "csent/errors.hpp"

namespace csent::kern {

namespace {

long dim_product(const std::vector<int>& dims) {
    long d = 1;
    for (int x : dims) d *= x;
    return d;
}

void check_positions(const std::vector<int>& dims, const std::vector<int>& positions) {
    for (int p : positions)
        if (p < 0 || p >= static_cast<int>(dims.size()))
            throw ShapeError("factor position out of range");
}

// Complement of `chosen` within [0, n), in ascending order.
std::vector<int> complement(int n, const std::vector<int>& chosen) {
    std::vector<char> mark(n, 0);
    for (int p : chosen) mark[p] = 1;
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!mark[i]) out.push_back(i);
    return out;
}

// Offsets of every multi-index over the factors at `positions`, laid out with
// positions[0] as the most significant digit.
std::vector<long> subindex_offsets(const std::vector<int>& dims,
                                   const std::vector<int>& positions) {
    auto str = strides(dims);
    long count = 1;
    for (int p : positions) count *= dims[p];
    std::vector<long> offs(count, 0);
    long rep = count;
    for (int p : positions) {
        rep /= dims[p];
        for (long i = 0; i < count; ++i) {
            long digit = (i / rep) % dims[p];
            offs[i] += digit * str[p];
        }
    }
    return offs;
}

} // namespace

std::vector<long> strides(const std::vector<int>& dims) {
    std::vector<long> s(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
        s[i] = s[i + 1] * dims[i + 1];
    return s;
}

// Outputs below this entry count skip the parallel region; team start-up
// costs more than the loop at small sizes.
constexpr long kParallelCutoff = 4096;

Mat tensor(const Mat& a, const Mat& b) {
    const long ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    Mat out(ra * rb, ca * cb);
    if (out.size() < kParallelCutoff) {
        for (long ia = 0; ia < ra; ++ia)
            for (long ja = 0; ja < ca; ++ja)
                out.block(ia * rb, ja * cb, rb, cb) = a(ia, ja) * b;
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long ia = 0; ia < ra; ++ia)
        for (long ja = 0; ja < ca; ++ja)
            out.block(ia * rb, ja * cb, rb, cb) = a(ia, ja) * b;
    return out;
}

Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& discard) {
    const long d = dim_product(dims);
    if (m.rows() != d || m.cols() != d)
        throw ShapeError("partial_trace: matrix does not match layout dimension");
    check_positions(dims, discard);

    const auto keep = complement(static_cast<int>(dims.size()), discard);
    const auto keep_offs = subindex_offsets(dims, keep);
    const auto sum_offs = subindex_offsets(dims, discard);
    const long dk = static_cast<long>(keep_offs.size());
    const long ds = static_cast<long>(sum_offs.size());

    Mat out(dk, dk);
    if (dk * dk < kParallelCutoff) {
        for (long r = 0; r < dk; ++r)
            for (long c = 0; c < dk; ++c) {
                cxd acc = 0.0;
                for (long s = 0; s < ds; ++s)
                    acc += m(keep_offs[r] + sum_offs[s], keep_offs[c] + sum_offs[s]);
                out(r, c) = acc;
            }
        return out;
    }
#pragma omp parallel for schedule(static) collapse(2)
    for (long r = 0; r < dk; ++r)
        for (long c = 0; c < dk; ++c) {
            cxd acc = 0.0;
            for (long s = 0; s < ds; ++s)
                acc += m(keep_offs[r] + sum_offs[s], keep_offs[c] + sum_offs[s]);
            out(r, c) = acc;
        }
    return out;
}

Mat partial_transpose(const Mat& m, const std::vector<int>& dims,
                      const std::vector<int>& positions) {
    const long d = dim_product(dims);
    if (m.rows() != d || m.cols() != d)
        throw ShapeError("partial_transpose: matrix does not match layout dimension");
    check_positions(dims, positions);

    const auto flip = subindex_offsets(dims, positions);
    const auto rest = subindex_offsets(dims, complement(static_cast<int>(dims.size()), positions));
    const long df = static_cast<long>(flip.size());
    const long dr = static_cast<long>(rest.size());

    Mat out(d, d);
    if (d * d < kParallelCutoff) {
        for (long rf = 0; rf < df; ++rf)
            for (long cf = 0; cf < df; ++cf)
                for (long rr = 0; rr < dr; ++rr)
                    for (long cc = 0; cc < dr; ++cc)
                        out(rest[rr] + flip[cf], rest[cc] + flip[rf]) =
                            m(rest[rr] + flip[rf], rest[cc] + flip[cf]);
        return out;
    }
#pragma omp parallel for schedule(static) collapse(2)
    for (long rf = 0; rf < df; ++rf)
        for (long cf = 0; cf < df; ++cf)
            for (long rr = 0; rr < dr; ++rr)
                for (long cc = 0; cc < dr; ++cc)
                    out(rest[rr] + flip[cf], rest[cc] + flip[rf]) =
                        m(rest[rr] + flip[rf], rest[cc] + flip[cf]);
    return out;
}

std::vector<long> permutation_map(const std::vector<int>& dims,
                                  const std::vector<int>& order) {
    const int n = static_cast<int>(dims.size());
    if (static_cast<int>(order.size()) != n)
        throw ShapeError("permutation_map: order length mismatch");
    check_positions(dims, order);

    std::vector<int> new_dims(n);
    for (int k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
    const auto old_str = strides(dims);
    const auto new_str = strides(new_dims);

    const long d = dim_product(dims);
    std::vector<long> map(d);
    for (long i = 0; i < d; ++i) {
        long j = 0;
        for (int k = 0; k < n; ++k) {
            long digit = (i / old_str[order[k]]) % dims[order[k]];
            j += digit * new_str[k];
        }
        map[i] = j;
    }
    return map;
}

Mat permute_factors(const Mat& m, const std::vector<int>& dims,
                    const std::vector<int>& order) {
    const long d = dim_product(dims);
    if (m.rows() != d || m.cols() != d)
        throw ShapeError("permute_factors: matrix does not match layout dimension");
    const auto map = permutation_map(dims, order);
    Mat out(d, d);
    if (d * d < kParallelCutoff) {
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) out(map[i], map[j]) = m(i, j);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            out(map[i], map[j]) = m(i, j);
    return out;
}

Mat permutation_unitary(const std::vector<int>& dims, const std::vector<int>& order) {
    const long d = dim_product(dims);
    const auto map = permutation_map(dims, order);
    Mat p = Mat::Zero(d, d);
    for (long i = 0; i < d; ++i) p(map[i], i) = 1.0;
    return p;
}

Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& positions) {
    check_positions(dims, positions);
    long dop = 1;
    for (int p : positions) dop *= dims[p];
    if (op.rows() != dop || op.cols() != dop)
        throw ShapeError("embed: operator does not match selected factor dimensions");

    const auto sel_offs = subindex_offsets(dims, positions);
    const auto rest_offs = subindex_offsets(dims, complement(static_cast<int>(dims.size()), positions));
    const long d = dim_product(dims);
    const long dr = static_cast<long>(rest_offs.size());

    Mat out = Mat::Zero(d, d);
    if (d * d < kParallelCutoff) {
        for (long r = 0; r < dop; ++r)
            for (long c = 0; c < dop; ++c) {
                if (op(r, c) == cxd(0.0, 0.0)) continue;
                for (long k = 0; k < dr; ++k)
                    out(sel_offs[r] + rest_offs[k], sel_offs[c] + rest_offs[k]) = op(r, c);
            }
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long r = 0; r < dop; ++r)
        for (long c = 0; c < dop; ++c) {
            if (op(r, c) == cxd(0.0, 0.0)) continue;
            for (long k = 0; k < dr; ++k)
                out(sel_offs[r] + rest_offs[k], sel_offs[c] + rest_offs[k]) = op(r, c);
        }
    return out;
}

namespace serial {

Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long ia = 0; ia < a.rows(); ++ia)
        for (long ja = 0; ja < a.cols(); ++ja)
            for (long ib = 0; ib < b.rows(); ++ib)
                for (long jb = 0; jb < b.cols(); ++jb)
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
    return out;
}

namespace {

// Digits of index i over dims, most significant first.
std::vector<int> digits_of(long i, const std::vector<int>& dims) {
    std::vector<int> g(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        g[k] = static_cast<int>(i % dims[k]);
        i /= dims[k];
    }
    return g;
}

long index_of(const std::vector<int>& g, const std::vector<int>& dims) {
    long i = 0;
    for (size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + g[k];
    return i;
}

} // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& discard) {
    std::vector<int> keep;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
        if (std::find(discard.begin(), discard.end(), k) == discard.end()) keep.push_back(k);

    std::vector<int> keep_dims;
    for (int k : keep) keep_dims.push_back(dims[k]);
    long dk = 1;
    for (int x : keep_dims) dk *= x;

    Mat out = Mat::Zero(dk, dk);
    for (long i = 0; i < m.rows(); ++i) {
        const auto gi = digits_of(i, dims);
        for (long j = 0; j < m.cols(); ++j) {
            const auto gj = digits_of(j, dims);
            bool diag = true;
            for (int t : discard)
                if (gi[t] != gj[t]) { diag = false; break; }
            if (!diag) continue;
            std::vector<int> ri, rj;
            for (int k : keep) { ri.push_back(gi[k]); rj.push_back(gj[k]); }
            out(index_of(ri, keep_dims), index_of(rj, keep_dims)) += m(i, j);
        }
    }
    return out;
}

Mat partial_transpose(const Mat& m, const std::vector<int>& dims,
                      const std::vector<int>& positions) {
    Mat out(m.rows(), m.cols());
    for (long i = 0; i < m.rows(); ++i) {
        auto gi = digits_of(i, dims);
        for (long j = 0; j < m.cols(); ++j) {
            auto gj = digits_of(j, dims);
            auto ri = gi, rj = gj;
            for (int p : positions) std::swap(ri[p], rj[p]);
            out(index_of(ri, dims), index_of(rj, dims)) = m(i, j);
        }
    }
    return out;
}

Mat permute_factors(const Mat& m, const std::vector<int>& dims,
                    const std::vector<int>& order) {
    std::vector<int> new_dims(order.size());
    for (size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];
    Mat out(m.rows(), m.cols());
    for (long i = 0; i < m.rows(); ++i) {
        const auto gi = digits_of(i, dims);
        std::vector<int> ni(order.size());
        for (size_t k = 0; k < order.size(); ++k) ni[k] = gi[order[k]];
        const long pi = index_of(ni, new_dims);
        for (long j = 0; j < m.cols(); ++j) {
            const auto gj = digits_of(j, dims);
            std::vector<int> nj(order.size());
            for (size_t k = 0; k < order.size(); ++k) nj[k] = gj[order[k]];
            out(pi, index_of(nj, new_dims)) = m(i, j);
        }
    }
    return out;
}

Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& positions) {
    long d = 1;
    for (int x : dims) d *= x;
    std::vector<int> op_dims;
    for (int p : positions) op_dims.push_back(dims[p]);
    Mat out = Mat::Zero(d, d);
    for (long i = 0; i < d; ++i) {
        const auto gi = digits_of(i, dims);
        for (long j = 0; j < d; ++j) {
            const auto gj = digits_of(j, dims);
            bool rest_equal = true;
            for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
                if (std::find(positions.begin(), positions.end(), k) != positions.end()) continue;
                if (gi[k] != gj[k]) { rest_equal = false; break; }
            }
            if (!rest_equal) continue;
            std::vector<int> oi, oj;
            for (int p : positions) { oi.push_back(gi[p]); oj.push_back(gj[p]); }
            out(i, j) = op(index_of(oi, op_dims), index_of(oj, op_dims));
        }
    }
    return out;
}

} // namespace serial

} // namespace csent::kern
