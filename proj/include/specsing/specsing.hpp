#pragma once

#include "specsing/core.hpp"
#include "specsing/io.hpp"
#include "specsing/potentials.hpp"
#include "specsing/pseudoherm.hpp"
#include "specsing/slablaser.hpp"
#include "specsing/spectral.hpp"
#include "specsing/transfer.hpp"
