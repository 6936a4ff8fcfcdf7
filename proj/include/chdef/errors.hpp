#pragma once

#include <stdexcept>
#include <string>

namespace chdef {

/// Operand shapes do not agree (matrix dims, image counts).
class dimension_error : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Determinant is not a unit of Q[u, u^-1].
class not_invertible_error : public std::domain_error {
   public:
    not_invertible_error() : std::domain_error("not invertible over ring") {}
};

/// Malformed word, presentation or JSON input.
class parse_error : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A geometric precondition failed (bad form, point off the null cone, ...).
class geometry_error : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// The Hermitian form is singular or not of signature (n,1).
class degenerate_form_error : public geometry_error {
   public:
    using geometry_error::geometry_error;
};

/// Cusp generators do not share a fixed point on the boundary.
class no_common_fixed_point_error : public geometry_error {
   public:
    using geometry_error::geometry_error;
};

class centralizer_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class relation_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace chdef
