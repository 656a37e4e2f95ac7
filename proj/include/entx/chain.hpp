#ifndef ENTX_CHAIN_HPP
#define ENTX_CHAIN_HPP

#include <map>
#include <stdexcept>

#include "entx/rational.hpp"

namespace entx {

/// Sparse simplicial chain: degree plus a simplex-id -> rational coefficient
/// map. Zero coefficients are never stored.
class Chain {
public:
    Chain() = default;
    explicit Chain(int degree) : degree_(degree) {}

    int degree() const { return degree_; }

    const Rat& coeff(int simplex) const
    {
        static const Rat zero = 0;
        auto it = coeffs_.find(simplex);
        return it == coeffs_.end() ? zero : it->second;
    }

    void set(int simplex, const Rat& value)
    {
        if (value == 0)
            coeffs_.erase(simplex);
        else
            coeffs_[simplex] = value;
    }

    void add(int simplex, const Rat& value)
    {
        auto it = coeffs_.find(simplex);
        if (it == coeffs_.end()) {
            if (value != 0) coeffs_[simplex] = value;
            return;
        }
        it->second += value;
        if (it->second == 0) coeffs_.erase(it);
    }

    Chain& operator+=(const Chain& other)
    {
        if (degree_ != other.degree_)
            throw std::invalid_argument("chain degree mismatch");
        for (const auto& [s, v] : other.coeffs_) add(s, v);
        return *this;
    }

    Chain& operator*=(const Rat& scalar)
    {
        if (scalar == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [s, v] : coeffs_) v *= scalar;
        return *this;
    }

    friend Chain operator+(Chain a, const Chain& b) { a += b; return a; }
    friend Chain operator*(const Rat& s, Chain c) { c *= s; return c; }

    bool is_zero() const { return coeffs_.empty(); }

    Rat l1_norm() const
    {
        Rat total = 0;
        for (const auto& [s, v] : coeffs_) total += abs(v);
        return total;
    }

    size_t support_size() const { return coeffs_.size(); }
    const std::map<int, Rat>& entries() const { return coeffs_; }

    bool operator==(const Chain& other) const
    {
        return degree_ == other.degree_ && coeffs_ == other.coeffs_;
    }

private:
    int degree_ = 0;
    std::map<int, Rat> coeffs_;
};

} // namespace entx

#endif
