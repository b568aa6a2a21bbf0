#include <atomic>
#include <cstdlib>
#include <cstring>

#include "levylab/kernels/kernels.hpp"

namespace levylab::kernels {
namespace {

std::atomic<const Kernels*> g_active{nullptr};
std::atomic<Lane> g_lane{Lane::scalar};

const Kernels* pick_default() {
  const char* env = std::getenv("LEVYLAB_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) {
      g_lane.store(Lane::scalar);
      return &scalar_kernels();
    }
    if (std::strcmp(env, "avx2") == 0) {
      if (const Kernels* k = avx2_kernels()) {
        g_lane.store(Lane::avx2);
        return k;
      }
      // requested lane unavailable; fall through to auto
    }
  }
  if (const Kernels* k = avx2_kernels()) {
    g_lane.store(Lane::avx2);
    return k;
  }
  g_lane.store(Lane::scalar);
  return &scalar_kernels();
}

}  // namespace

const Kernels& active() {
  const Kernels* k = g_active.load(std::memory_order_acquire);
  if (k == nullptr) {
    k = pick_default();
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

Lane active_lane() {
  active();
  return g_lane.load();
}

void force_lane(Lane lane) {
  if (lane == Lane::avx2) {
    if (const Kernels* k = avx2_kernels()) {
      g_active.store(k);
      g_lane.store(Lane::avx2);
      return;
    }
  }
  g_active.store(&scalar_kernels());
  g_lane.store(Lane::scalar);
}

bool avx2_available() { return avx2_kernels() != nullptr; }

}  // namespace levylab::kernels
