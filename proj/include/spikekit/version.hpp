#ifndef SPIKEKIT_VERSION_HPP
#define SPIKEKIT_VERSION_HPP

namespace spikekit {

inline constexpr const char* version_string = "spikekit 0.1.0";

} // namespace spikekit

#endif
