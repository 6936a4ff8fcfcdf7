#pragma once

/**
 * @file representation.hpp
 * @brief Generator-to-matrix assignments and word evaluation.
 *
 * `Representation<RingMatrix>` is the exact mode (identities checked in
 * Q[u, u^-1]); `Representation<NumMatrix>` is the numeric mode.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ring_matrix.hpp"
#include "words.hpp"

namespace chdef {

template <class Mat>
struct matrix_traits;

template <>
struct matrix_traits<RingMatrix> {
    static constexpr bool exact = true;
    static std::size_t dim(const RingMatrix& a) { return a.dim(); }
    static RingMatrix identity(std::size_t n) { return RingMatrix::identity(n); }
    static std::optional<RingMatrix> try_inverse(const RingMatrix& a) {
        try {
            return mat_inverse(a);
        } catch (const not_invertible_error&) {
            return std::nullopt;
        }
    }
};

template <>
struct matrix_traits<NumMatrix> {
    static constexpr bool exact = false;
    static std::size_t dim(const NumMatrix& a) { return static_cast<std::size_t>(a.rows()); }
    static NumMatrix identity(std::size_t n) {
        return NumMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    }
    static std::optional<NumMatrix> try_inverse(const NumMatrix& a) {
        Eigen::FullPivLU<NumMatrix> lu(a);
        if (!lu.isInvertible()) return std::nullopt;
        return lu.inverse();
    }
};

template <class Mat>
class Representation {
   public:
    using traits = matrix_traits<Mat>;

    Representation(Presentation presentation, std::vector<Mat> images)
        : presentation_(std::move(presentation)), images_(std::move(images)) {
        if (images_.size() != presentation_.rank())
            throw dimension_error("representation needs " + std::to_string(presentation_.rank()) + " images, got " +
                                  std::to_string(images_.size()));
        if (images_.empty()) throw dimension_error("representation has no generators");
        dim_ = traits::dim(images_.front());
        for (const auto& m : images_)
            if (traits::dim(m) != dim_) throw dimension_error("generator images have different dimensions");
        inverses_.reserve(images_.size());
        for (const auto& m : images_) inverses_.push_back(traits::try_inverse(m));
    }

    const Presentation& presentation() const noexcept { return presentation_; }
    const std::vector<Mat>& images() const noexcept { return images_; }
    const Mat& image(std::size_t g) const { return images_.at(g); }
    std::size_t dim() const noexcept { return dim_; }
    static constexpr bool exact() { return traits::exact; }

    /// Image of g^-1; throws not_invertible_error for a singular generator image.
    const Mat& inverse_image(std::size_t g) const {
        const auto& inv = inverses_.at(g);
        if (!inv) throw not_invertible_error();
        return *inv;
    }

   private:
    Presentation presentation_;
    std::vector<Mat> images_;
    std::vector<std::optional<Mat>> inverses_;
    std::size_t dim_ = 0;
};

/// Ordered product of generator images; the empty word maps to I.
template <class Mat>
Mat evaluate_word(const Word& word, const Representation<Mat>& rep) {
    Mat out = Representation<Mat>::traits::identity(rep.dim());
    for (const auto& l : word.letters()) {
        const Mat& factor = l.exponent > 0 ? rep.image(l.generator) : rep.inverse_image(l.generator);
        for (int k = 0; k < std::abs(l.exponent); ++k) out = Mat(out * factor);
    }
    return out;
}

/// Numeric image of an exact representation at u = e^{i alpha}.
inline Representation<NumMatrix> evaluate(const Representation<RingMatrix>& rep, double alpha) {
    std::vector<NumMatrix> images;
    images.reserve(rep.images().size());
    for (const auto& m : rep.images()) images.push_back(evaluate(m, alpha));
    return {rep.presentation(), std::move(images)};
}

struct RelatorCheck {
    std::string relator;
    bool holds = false;
    double deviation = 0.0;  ///< max |entry of (image - I)|; 0 in exact mode when it holds
};

struct RelationReport {
    std::vector<RelatorCheck> relators;
    bool all_hold() const {
        for (const auto& r : relators)
            if (!r.holds) return false;
        return true;
    }
};

/// Exact mode: each relator must evaluate to I in the ring.
inline RelationReport check_relations(const Representation<RingMatrix>& rep) {
    RelationReport report;
    for (const auto& r : rep.presentation().relators) {
        RingMatrix img = evaluate_word(r, rep);
        bool ok = img.is_identity();
        double dev = 0.0;
        if (!ok) {
            // Size of the residual at u = 1, only for reporting.
            NumMatrix d = evaluate(img - RingMatrix::identity(rep.dim()), 0.0);
            dev = d.cwiseAbs().maxCoeff();
        }
        report.relators.push_back({format_word(r, rep.presentation()), ok, dev});
    }
    return report;
}

/// Numeric mode: max entrywise deviation from I per relator, compared with tol.
inline RelationReport check_relations(const Representation<NumMatrix>& rep, double tol = 1e-9) {
    RelationReport report;
    const auto n = static_cast<Eigen::Index>(rep.dim());
    for (const auto& r : rep.presentation().relators) {
        NumMatrix img = evaluate_word(r, rep);
        double dev = (img - NumMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
        report.relators.push_back({format_word(r, rep.presentation()), dev <= tol, dev});
    }
    return report;
}

}  // namespace chdef
