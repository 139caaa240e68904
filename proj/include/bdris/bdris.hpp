#ifndef BDRIS_BDRIS_HPP
#define BDRIS_BDRIS_HPP

// Umbrella header: channel synthesis, five-phase pilot scheduling,
// least-squares recovery and the Monte-Carlo harness for double-BD-RIS
// multi-user MIMO uplink channel estimation.

#include "bdris/bench.hpp"
#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/estimator.hpp"
#include "bdris/linalg.hpp"
#include "bdris/rng.hpp"
#include "bdris/scenario.hpp"
#include "bdris/schedule.hpp"
#include "bdris/selftest.hpp"

#endif
