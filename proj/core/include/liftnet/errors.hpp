#ifndef LIFTNET_ERRORS_HPP
#define LIFTNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liftnet {

/// Base class for all liftnet exceptions.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid physical or geometric parameter (non-positive length, bad fraction, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

/// Malformed input file: bad CSV cell, missing column, checksum mismatch.
class format_error : public error {
public:
    explicit format_error(const std::string& msg) : error(msg) {}
};

/// Invalid run configuration (flags, fractions, layer sizes, ...).
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

/// Evaluation point outside the wetted cross-section (or on a wall where
/// derivatives are requested).
class out_of_domain_error : public error {
public:
    explicit out_of_domain_error(const std::string& msg) : error(msg) {}
};

/// Feature map requested at a stagnation point: the nondimensionalization
/// divides by the local axial velocity, which is effectively zero here.
class degenerate_point_error : public error {
public:
    explicit degenerate_point_error(const std::string& msg) : error(msg) {}
};

/// Tensor width does not match the network layer it is fed into.
class shape_error : public error {
public:
    explicit shape_error(const std::string& msg) : error(msg) {}
};

/// Metric undefined for this pair (zero-magnitude vector in an angular or
/// relative-magnitude error). Aggregators catch this and count the exclusion.
class undefined_metric_error : public error {
public:
    explicit undefined_metric_error(const std::string& msg) : error(msg) {}
};

/// Training produced a non-finite loss or parameter. Carries the epoch at
/// which divergence was detected.
class training_diverged_error : public error {
public:
    training_diverged_error(const std::string& msg, int epoch)
        : error(msg), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

} // namespace liftnet

#endif // LIFTNET_ERRORS_HPP
