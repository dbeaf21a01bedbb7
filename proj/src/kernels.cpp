#include "medwit/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace medwit::kernels {

namespace {

std::vector<Index> strides_of(std::span<const int> dims) {
    std::vector<Index> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

Index total_of(std::span<const int> dims) {
    Index d = 1;
    for (int v : dims) d *= v;
    return d;
}

void check_square(const Matrix& x, std::span<const int> dims, const char* who) {
    const Index d = total_of(dims);
    if (x.rows() != d || x.cols() != d) {
        throw std::invalid_argument(std::string(who) + ": matrix size does not match layout");
    }
}

void check_positions(std::span<const std::size_t> pos, std::size_t n, const char* who) {
    std::vector<bool> seen(n, false);
    for (auto p : pos) {
        if (p >= n || seen[p]) throw std::invalid_argument(std::string(who) + ": invalid subsystem positions");
        seen[p] = true;
    }
}

// Offsets contributed by the parts at `pos` for every joint index over those parts
// (row-major in the order given by `pos`).
std::vector<Index> offsets_for(std::span<const int> dims, std::span<const std::size_t> pos) {
    const auto strides = strides_of(dims);
    Index count = 1;
    for (auto p : pos) count *= dims[p];
    std::vector<Index> off(static_cast<std::size_t>(count), 0);
    for (Index r = 0; r < count; ++r) {
        Index rem = r;
        Index o = 0;
        for (std::size_t k = pos.size(); k-- > 0;) {
            const int d = dims[pos[k]];
            o += (rem % d) * strides[pos[k]];
            rem /= d;
        }
        off[static_cast<std::size_t>(r)] = o;
    }
    return off;
}

std::vector<std::size_t> complement_of(std::span<const std::size_t> pos, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::find(pos.begin(), pos.end(), k) == pos.end()) out.push_back(k);
    }
    return out;
}

// Joint index over `pos` (in pos order) of a full composite index.
Index sub_index(Index full, std::span<const int> dims, std::span<const Index> strides,
                std::span<const std::size_t> pos) {
    Index s = 0;
    for (auto p : pos) s = s * dims[p] + (full / strides[p]) % dims[p];
    return s;
}

}  // namespace

Matrix partial_trace(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> keep) {
    check_square(x, dims, "partial_trace");
    check_positions(keep, dims.size(), "partial_trace");
    const auto traced = complement_of(keep, dims.size());
    const auto offK = offsets_for(dims, keep);
    const auto offT = offsets_for(dims, traced);
    const Index dk = static_cast<Index>(offK.size());
    const Index dt = static_cast<Index>(offT.size());
    Matrix out(dk, dk);
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < dk; ++c) {
        for (Index r = 0; r < dk; ++r) {
            cplx acc{0.0, 0.0};
            for (Index t = 0; t < dt; ++t) {
                acc += x(offK[r] + offT[t], offK[c] + offT[t]);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

Matrix partial_transpose(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> on) {
    check_square(x, dims, "partial_transpose");
    check_positions(on, dims.size(), "partial_transpose");
    const Index d = x.rows();
    const auto strides = strides_of(dims);
    std::vector<Index> offOn(static_cast<std::size_t>(d), 0);
    for (Index i = 0; i < d; ++i) {
        Index o = 0;
        for (auto p : on) o += ((i / strides[p]) % dims[p]) * strides[p];
        offOn[i] = o;
    }
    Matrix out(d, d);
#pragma omp parallel for schedule(static)
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            out(i, j) = x(i - offOn[i] + offOn[j], j - offOn[j] + offOn[i]);
        }
    }
    return out;
}

Matrix permute(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> order) {
    check_square(x, dims, "permute");
    if (order.size() != dims.size()) throw std::invalid_argument("permute: order must list every part");
    check_positions(order, dims.size(), "permute");
    // New index i enumerates old parts in `order`; its old offset is offsets_for(order)[i].
    const auto src = offsets_for(dims, order);
    const Index d = x.rows();
    Matrix out(d, d);
#pragma omp parallel for schedule(static)
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) out(i, j) = x(src[i], src[j]);
    }
    return out;
}

Matrix embed(const Matrix& op, std::span<const int> dims, std::span<const std::size_t> positions) {
    check_positions(positions, dims.size(), "embed");
    const auto offS = offsets_for(dims, positions);
    const Index ds = static_cast<Index>(offS.size());
    if (op.rows() != ds || op.cols() != ds) throw std::invalid_argument("embed: operator size mismatch");
    const Index d = total_of(dims);
    const auto strides = strides_of(dims);
    Matrix out = Matrix::Zero(d, d);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < d; ++i) {
        const Index si = sub_index(i, dims, strides, positions);
        const Index rest = i - offS[si];
        for (Index s = 0; s < ds; ++s) out(i, rest + offS[s]) = op(si, s);
    }
    return out;
}

Matrix apply_left(const Matrix& op, const Matrix& x, std::span<const int> dims,
                  std::span<const std::size_t> positions) {
    check_square(x, dims, "apply_left");
    check_positions(positions, dims.size(), "apply_left");
    const auto offS = offsets_for(dims, positions);
    const Index ds = static_cast<Index>(offS.size());
    if (op.rows() != ds || op.cols() != ds) throw std::invalid_argument("apply_left: operator size mismatch");
    const Index d = x.rows();
    const auto strides = strides_of(dims);
    Matrix out(d, d);
#pragma omp parallel for schedule(static)
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            const Index si = sub_index(i, dims, strides, positions);
            const Index rest = i - offS[si];
            cplx acc{0.0, 0.0};
            for (Index s = 0; s < ds; ++s) acc += op(si, s) * x(rest + offS[s], j);
            out(i, j) = acc;
        }
    }
    return out;
}

Matrix conjugate(const Matrix& op, const Matrix& x, std::span<const int> dims,
                 std::span<const std::size_t> positions) {
    const Matrix left = apply_left(op, x, dims, positions);
    return apply_left(op, left.adjoint(), dims, positions).adjoint();
}

namespace reference {

namespace {

std::vector<int> digits_of(Index i, std::span<const int> dims) {
    std::vector<int> dg(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        dg[k] = static_cast<int>(i % dims[k]);
        i /= dims[k];
    }
    return dg;
}

Index index_of(const std::vector<int>& dg, std::span<const int> dims) {
    Index i = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + dg[k];
    return i;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Matrix partial_trace(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> keep) {
    check_square(x, dims, "partial_trace");
    std::vector<int> kdims;
    for (auto p : keep) kdims.push_back(dims[p]);
    const Index dk = total_of(kdims);
    Matrix out = Matrix::Zero(dk, dk);
    const Index d = x.rows();
    for (Index i = 0; i < d; ++i) {
        const auto di = digits_of(i, dims);
        for (Index j = 0; j < d; ++j) {
            const auto dj = digits_of(j, dims);
            bool traced_equal = true;
            for (std::size_t k = 0; k < dims.size() && traced_equal; ++k) {
                const bool kept = std::find(keep.begin(), keep.end(), k) != keep.end();
                if (!kept && di[k] != dj[k]) traced_equal = false;
            }
            if (!traced_equal) continue;
            std::vector<int> ri, rj;
            for (auto p : keep) {
                ri.push_back(di[p]);
                rj.push_back(dj[p]);
            }
            out(index_of(ri, kdims), index_of(rj, kdims)) += x(i, j);
        }
    }
    return out;
}

Matrix partial_transpose(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> on) {
    check_square(x, dims, "partial_transpose");
    const Index d = x.rows();
    Matrix out(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            auto di = digits_of(i, dims);
            auto dj = digits_of(j, dims);
            for (auto p : on) std::swap(di[p], dj[p]);
            out(index_of(di, dims), index_of(dj, dims)) = x(i, j);
        }
    }
    return out;
}

Matrix permute(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> order) {
    check_square(x, dims, "permute");
    std::vector<int> ndims;
    for (auto p : order) ndims.push_back(dims[p]);
    const Index d = x.rows();
    Matrix out(d, d);
    for (Index i = 0; i < d; ++i) {
        const auto di = digits_of(i, dims);
        std::vector<int> ni;
        for (auto p : order) ni.push_back(di[p]);
        for (Index j = 0; j < d; ++j) {
            const auto dj = digits_of(j, dims);
            std::vector<int> nj;
            for (auto p : order) nj.push_back(dj[p]);
            out(index_of(ni, ndims), index_of(nj, ndims)) = x(i, j);
        }
    }
    return out;
}

Matrix embed(const Matrix& op, std::span<const int> dims, std::span<const std::size_t> positions) {
    // op ⊗ 1 on the order (positions..., rest...), then move parts back in place.
    const auto rest = complement_of(positions, dims.size());
    std::vector<std::size_t> staged(positions.begin(), positions.end());
    staged.insert(staged.end(), rest.begin(), rest.end());
    std::vector<int> sdims;
    for (auto p : staged) sdims.push_back(dims[p]);
    Index drest = 1;
    for (auto p : rest) drest *= dims[p];
    const Matrix wide = kron(op, Matrix::Identity(drest, drest));
    std::vector<std::size_t> back(dims.size());
    for (std::size_t k = 0; k < staged.size(); ++k) back[staged[k]] = k;
    return permute(wide, sdims, back);
}

Matrix apply_left(const Matrix& op, const Matrix& x, std::span<const int> dims,
                  std::span<const std::size_t> positions) {
    return embed(op, dims, positions) * x;
}

Matrix conjugate(const Matrix& op, const Matrix& x, std::span<const int> dims,
                 std::span<const std::size_t> positions) {
    const Matrix e = embed(op, dims, positions);
    return e * x * e.adjoint();
}

}  // namespace reference

}  // namespace medwit::kernels
