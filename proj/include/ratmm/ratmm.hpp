#ifndef RATMM_RATMM_HPP
#define RATMM_RATMM_HPP

#include "ratmm/errors.hpp"
#include "ratmm/basis.hpp"
#include "ratmm/approximant.hpp"
#include "ratmm/weights.hpp"
#include "ratmm/dual.hpp"
#include "ratmm/lawson.hpp"
#include "ratmm/lp.hpp"
#include "ratmm/certificates.hpp"

#endif  // RATMM_RATMM_HPP
