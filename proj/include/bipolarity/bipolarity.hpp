#pragma once

// Umbrella header: the whole obstruction toolkit.

#include "bipolarity/bipolar_cert.hpp"
#include "bipolarity/cfk.hpp"
#include "bipolarity/dinv.hpp"
#include "bipolarity/linkform.hpp"
#include "bipolarity/numtheory.hpp"
#include "bipolarity/obstruction.hpp"
#include "bipolarity/pipeline.hpp"
#include "bipolarity/rational.hpp"
#include "bipolarity/vsequence.hpp"
