#pragma once

#include <optional>
#include <string>

#include "cmrs/complete_mapping.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/mrs.hpp"

// OpenMP verifiers. They return exactly what the serial check_* functions
// return: on failure the serial checker is rerun to report the first locus.
namespace cmrs::par {

std::optional<std::string> check_mrs(const RectangleSet& r);
std::optional<std::string> check_complete_mapping(const CompleteMapping& cm);
std::optional<std::string> check_kas(const KotzigArraySet& s);

}  // namespace cmrs::par
