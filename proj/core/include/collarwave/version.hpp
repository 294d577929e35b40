#pragma once

namespace collarwave {

inline constexpr const char* kVersion = "0.1.0";

// Version of the model artifact JSON document. Bump on any change to the
// serialized layout; load_model rejects documents with a different value.
inline constexpr int kModelFormatVersion = 1;

}  // namespace collarwave
