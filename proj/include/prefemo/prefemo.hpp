#pragma once

#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>
#include <prefemo/problems.hpp>
#include <prefemo/scalarize.hpp>
#include <prefemo/variation.hpp>
#include <prefemo/metrics.hpp>
#include <prefemo/algorithms.hpp>
#include <prefemo/harness.hpp>
#include <prefemo/steer.hpp>
