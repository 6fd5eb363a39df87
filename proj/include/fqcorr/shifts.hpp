#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fqcorr/factor.hpp"
#include "fqcorr/poly.hpp"

namespace fqcorr {

// A tuple h = (h_1, ..., h_k) of pairwise distinct shift polynomials.
class ShiftTuple {
  public:
    explicit ShiftTuple(std::vector<Poly> shifts) : shifts_(std::move(shifts)) {
        if (shifts_.empty()) throw std::invalid_argument("shift tuple must be nonempty");
        for (size_t i = 1; i < shifts_.size(); ++i)
            if (!(shifts_[i].field() == shifts_[0].field()))
                throw std::invalid_argument("shifts must share one coefficient field");
        for (size_t i = 0; i < shifts_.size(); ++i)
            for (size_t j = i + 1; j < shifts_.size(); ++j)
                if (shifts_[i] == shifts_[j])
                    throw std::invalid_argument("shifts must be pairwise distinct");
    }

    int k() const { return static_cast<int>(shifts_.size()); }
    const std::vector<Poly>& shifts() const { return shifts_; }
    const Poly& at(int i) const { return shifts_[size_t(i)]; }
    const PrimeField& field() const { return shifts_[0].field(); }

    int max_degree() const {
        int d = -1;
        for (const Poly& h : shifts_) d = std::max(d, h.degree());
        return d;
    }

    // Delta_h = prod over ordered pairs i != j of (h_i - h_j); 1 when k = 1.
    Poly difference_product() const {
        Poly d = Poly::one(field());
        for (int i = 0; i < k(); ++i)
            for (int j = 0; j < k(); ++j)
                if (i != j) d = d * (shifts_[size_t(i)] - shifts_[size_t(j)]);
        return d;
    }

    // nu_h(P) = max over pairs of v_P(h_i - h_j); 0 when k = 1.
    int nu(const Poly& P) const {
        int best = 0;
        for (int i = 0; i < k(); ++i)
            for (int j = i + 1; j < k(); ++j)
                best = std::max(best, valuation(shifts_[size_t(i)] - shifts_[size_t(j)], P));
        return best;
    }

    bool divides_difference(const Poly& P) const { return nu(P) > 0; }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < k(); ++i) {
            if (i) s += ",";
            s += shifts_[size_t(i)].str();
        }
        return s + ")";
    }

  private:
    std::vector<Poly> shifts_;
};

}  // namespace fqcorr
