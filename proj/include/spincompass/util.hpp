#ifndef SPINCOMPASS_UTIL_HPP
#define SPINCOMPASS_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>

namespace spincompass {

/// Format a double with 17 significant digits (shortest round-trippable
/// form is not used on purpose: fixed %.17g keeps output diffs stable).
std::string fmt_g17(double x);

/// FNV-1a 64-bit hash of a byte string, as 16 lowercase hex digits.
/// Used for config digests in manifests and campaign records.
std::string fnv1a_hex(const std::string &bytes);

/// splitmix64 step; used to derive independent per-sample seeds from a
/// master seed + counter without correlations.
std::uint64_t splitmix64(std::uint64_t x);

/// Run fn(0..n-1) on up to n_threads workers. Slots must be independent;
/// the first exception thrown by any worker is rethrown on the caller.
/// n_threads <= 1 runs inline.
void parallel_for(long n, int n_threads, const std::function<void(long)> &fn);

/// Hardware thread count, at least 1.
int default_thread_count();

} // namespace spincompass

#endif
