// Minimal end-to-end walkthrough: key ceremonies, one broadcast, and an
// assessment for a satisfying and a non-satisfying firearm.

#include <cstdio>

#include "securezone/securezone.hpp"

int main() {
  using namespace securezone;

  DeterministicRng rng(42);
  CentralAuthority ca = ca_setup(rng, {"officer", "rangemaster", "civilian"});

  SzaState range = sza_create(ca, 7, parse_policy("officer and rangemaster"), rng);

  FirearmKeyBundle instructor =
      firearm_register(ca, {"officer", "rangemaster"}, 1001, 501, 2'000'000'000, 0, rng);
  FirearmKeyBundle visitor =
      firearm_register(ca, {"civilian"}, 1002, 502, 2'000'000'000, 0, rng);

  const std::uint64_t now = 1'700'000'000;
  const Bytes beacon = compose_zone_message(range, now, rng);
  std::printf("zone policy: %s\n", serialize_policy(range.policy).c_str());
  std::printf("beacon size: %zu bytes\n", beacon.size());

  for (const auto* bundle : {&instructor, &visitor}) {
    const AdvisoryOutcome outcome = assess(*bundle, beacon, now);
    std::printf("firearm %llu -> %s (%s)\n",
                static_cast<unsigned long long>(bundle->firearm_id),
                std::string(advisory_token(outcome.kind)).c_str(), outcome.detail.c_str());
  }
  return 0;
}
