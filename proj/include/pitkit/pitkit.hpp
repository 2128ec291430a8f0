#pragma once

// Umbrella header.

#include "pitkit/circuit.hpp"
#include "pitkit/corpus.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/hitting.hpp"
#include "pitkit/ideals.hpp"
#include "pitkit/json_io.hpp"
#include "pitkit/linalg.hpp"
#include "pitkit/reduce.hpp"
