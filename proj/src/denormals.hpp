#pragma once

#if defined(__SSE2__) || defined(__x86_64__)
#include <xmmintrin.h>
#define EPLAB_HAVE_MXCSR 1
#endif

namespace eplab {

// Scoped flush-to-zero / denormals-are-zero. Far tails of renormalised layers
// otherwise decay into subnormals and slow the transfer loops down.
class FlushDenormals {
 public:
#ifdef EPLAB_HAVE_MXCSR
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#else
  FlushDenormals() = default;
#endif
 public:
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;
};

}  // namespace eplab
