#pragma once

#include "twopoint/classical.hpp"
#include "twopoint/errors.hpp"
#include "twopoint/format.hpp"
#include "twopoint/mc.hpp"
#include "twopoint/psf.hpp"
#include "twopoint/qfi.hpp"
#include "twopoint/states.hpp"
