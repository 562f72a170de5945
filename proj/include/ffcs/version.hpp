#pragma once

namespace ffcs {

inline constexpr char kArtifactName[] = "ffcs";
inline constexpr char kArtifactVersion[] = "1.0.0";

}  // namespace ffcs
