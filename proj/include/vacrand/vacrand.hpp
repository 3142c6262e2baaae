#pragma once

#include "vacrand/adc.hpp"
#include "vacrand/bitstream.hpp"
#include "vacrand/entropy.hpp"
#include "vacrand/equivalence.hpp"
#include "vacrand/errors.hpp"
#include "vacrand/gf2.hpp"
#include "vacrand/lfsr.hpp"
#include "vacrand/noise.hpp"
#include "vacrand/pipeline.hpp"
#include "vacrand/prng.hpp"
#include "vacrand/signal.hpp"
#include "vacrand/stattests.hpp"
