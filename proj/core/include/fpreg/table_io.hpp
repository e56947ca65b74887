#pragma once

#include "fpreg/tomography.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace fpreg::tomography {

/// Bundled rotation sets from the data directory (columns index,phi,alpha).
std::string_view bundled_left_set_csv();
std::string_view bundled_right_set_csv();

/// Parses index,phi,alpha rows; theta is pi/2.
RotationSet parse_rotation_set(std::string_view csv);
RotationSet read_rotation_set(const std::string& path);
void write_rotation_set(std::ostream& out, const RotationSet& set);

RotationSet bundled_left_set();
RotationSet bundled_right_set();

}  // namespace fpreg::tomography
