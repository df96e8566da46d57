#pragma once

// Umbrella header: the whole library in dependency order.

#include "qmeter/core.hpp"
#include "qmeter/linalg.hpp"
#include "qmeter/operators.hpp"
#include "qmeter/entropy.hpp"
#include "qmeter/measurement.hpp"
#include "qmeter/channel.hpp"
#include "qmeter/random.hpp"
#include "qmeter/structure.hpp"
#include "qmeter/mutual_info.hpp"
#include "qmeter/fixtures.hpp"
#include "qmeter/verify.hpp"
#include "qmeter/document.hpp"
