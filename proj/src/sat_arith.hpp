#pragma once

#include <cstdint>

namespace treedet::sat {

inline uint64_t mul(uint64_t a, uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

inline uint64_t add(uint64_t a, uint64_t b) {
    return (a > UINT64_MAX - b) ? UINT64_MAX : a + b;
}

inline uint64_t pow(uint64_t base, uint32_t exp) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < exp; ++i) r = mul(r, base);
    return r;
}

}  // namespace treedet::sat
