#pragma once

#include "bireduct/analysis.hpp"
#include "bireduct/bit_matrix.hpp"
#include "bireduct/classify.hpp"
#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"
#include "bireduct/oracle.hpp"
#include "bireduct/random_lab.hpp"
#include "bireduct/switching.hpp"
#include "bireduct/text_format.hpp"
