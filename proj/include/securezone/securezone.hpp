#pragma once

// Umbrella header for the Secure Zone toolkit.

#include "securezone/abe.hpp"
#include "securezone/bytes.hpp"
#include "securezone/crypto.hpp"
#include "securezone/field.hpp"
#include "securezone/group.hpp"
#include "securezone/policy.hpp"
#include "securezone/protocol.hpp"
#include "securezone/rng.hpp"
#include "securezone/simulator.hpp"
