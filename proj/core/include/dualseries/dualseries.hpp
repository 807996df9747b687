// dualseries.hpp: umbrella header for the whole library

#pragma once

#include "dualseries/diagnostics.hpp"
#include "dualseries/error.hpp"
#include "dualseries/expansion.hpp"
#include "dualseries/models.hpp"
#include "dualseries/numerics.hpp"
#include "dualseries/oracle.hpp"
#include "dualseries/spectral.hpp"
