#pragma once

#include <cstddef>
#include <vector>

namespace weylab::detail {

inline std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Raw index of a centered coordinate, periodic.
inline int wrap(long c, int n) {
    long r = (c + n / 2) % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

inline void decode(std::size_t flat, int D, int n, int* c) {
    for (int a = D - 1; a >= 0; --a) {
        c[a] = static_cast<int>(flat % static_cast<std::size_t>(n)) - n / 2;
        flat /= static_cast<std::size_t>(n);
    }
}

inline std::size_t encode(const int* c, int D, int n) {
    std::size_t f = 0;
    for (int a = 0; a < D; ++a) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(wrap(c[a], n));
    return f;
}

// Modular arithmetic on flat indices of a block of D axes.
class BlockArith {
  public:
    BlockArith(int D, int n) : D_(D), n_(n), M_(ipow(static_cast<std::size_t>(n), D)) {
        sub_.resize(M_ * M_);
        add_.resize(M_ * M_);
        neg_.resize(M_);
        std::vector<int> a(D), b(D), c(D);
        for (std::size_t i = 0; i < M_; ++i) {
            decode(i, D, n, a.data());
            for (int k = 0; k < D; ++k) c[k] = -a[k];
            neg_[i] = encode(c.data(), D, n);
            for (std::size_t j = 0; j < M_; ++j) {
                decode(j, D, n, b.data());
                for (int k = 0; k < D; ++k) c[k] = a[k] - b[k];
                sub_[i * M_ + j] = encode(c.data(), D, n);
                for (int k = 0; k < D; ++k) c[k] = a[k] + b[k];
                add_[i * M_ + j] = encode(c.data(), D, n);
            }
        }
    }
    std::size_t size() const { return M_; }
    std::size_t sub(std::size_t i, std::size_t j) const { return sub_[i * M_ + j]; }
    std::size_t add(std::size_t i, std::size_t j) const { return add_[i * M_ + j]; }
    std::size_t neg(std::size_t i) const { return neg_[i]; }

  private:
    int D_;
    int n_;
    std::size_t M_;
    std::vector<std::size_t> sub_, add_, neg_;
};

} // namespace weylab::detail
