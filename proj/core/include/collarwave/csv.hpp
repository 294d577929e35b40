#pragma once

#include <string>
#include <string_view>

#include "collarwave/types.hpp"

namespace collarwave {

// Samples CSV. Header exactly `t_ms,x_g,y_g,z_g`, LF line endings, decimal
// point `.`. Line numbers in errors are 1-based and count the header.
RawRecording parse_samples_csv(std::string_view text, std::string device_id = "",
                               double nominal_rate_hz = 12.5);

// Accelerations are printed with the shortest representation that parses
// back to the same double, so write -> parse is the identity.
std::string write_samples_csv(const RawRecording& rec);

// Annotations CSV. Header exactly `start_ms,end_ms,label,annotator`.
// Intervals are returned sorted by start; any overlap within the track is a
// parse error. The track annotator is taken from the first row.
AnnotationTrack parse_annotations_csv(std::string_view text, std::string recording_id = "");

std::string write_annotations_csv(const AnnotationTrack& track);

}  // namespace collarwave
