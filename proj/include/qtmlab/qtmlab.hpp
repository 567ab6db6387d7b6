#pragma once

#include "qtmlab/amplitude_expr.hpp"
#include "qtmlab/bvcompat.hpp"
#include "qtmlab/corpus.hpp"
#include "qtmlab/distribution.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/evolution.hpp"
#include "qtmlab/format.hpp"
#include "qtmlab/hilbert.hpp"
#include "qtmlab/machine.hpp"
#include "qtmlab/machine_io.hpp"
#include "qtmlab/observation.hpp"
#include "qtmlab/rng.hpp"
#include "qtmlab/tape.hpp"
