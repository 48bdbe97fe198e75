#pragma once

// Umbrella header.

#include "dynspec/besselspec.hpp"
#include "dynspec/comparison.hpp"
#include "dynspec/constspec.hpp"
#include "dynspec/criteria.hpp"
#include "dynspec/dspec.hpp"
#include "dynspec/enclosure.hpp"
#include "dynspec/linalg.hpp"
#include "dynspec/profiles.hpp"
#include "dynspec/specfun.hpp"
