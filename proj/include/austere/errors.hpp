#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace austere {

/// Failure categories raised by the library. Each maps onto one contract
/// violation; the CLI turns them into exit code 2.
enum class Errc {
    zero_vector,
    not_unit,
    not_horizontal,
    degenerate_basis,
    out_of_domain,
    immersion_failure,
    not_normal,
    rank_ambiguous,
    not_in_b,
    chart_singular,
    tau_out_of_range,
    dimension_mismatch,
    not_standard_position,
    not_complex_structure,
    frame_alignment,
    wrong_dimension,
    bad_dimension,
    unknown_entry,
    config,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::zero_vector: return "ZeroVector";
    case Errc::not_unit: return "NotUnit";
    case Errc::not_horizontal: return "NotHorizontal";
    case Errc::degenerate_basis: return "DegenerateBasis";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::immersion_failure: return "ImmersionFailure";
    case Errc::not_normal: return "NotNormal";
    case Errc::rank_ambiguous: return "RankAmbiguous";
    case Errc::not_in_b: return "NotInB";
    case Errc::chart_singular: return "ChartSingular";
    case Errc::tau_out_of_range: return "TauOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_standard_position: return "NotStandardPosition";
    case Errc::not_complex_structure: return "NotComplexStructure";
    case Errc::frame_alignment: return "FrameAlignmentError";
    case Errc::wrong_dimension: return "WrongDimension";
    case Errc::bad_dimension: return "BadDimension";
    case Errc::unknown_entry: return "UnknownEntry";
    case Errc::config: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace austere
