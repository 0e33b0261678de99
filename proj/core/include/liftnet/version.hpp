#ifndef LIFTNET_VERSION_HPP
#define LIFTNET_VERSION_HPP

namespace liftnet {

inline constexpr const char* version_string = "0.1.0";

} // namespace liftnet

#endif // LIFTNET_VERSION_HPP
