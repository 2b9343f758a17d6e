#pragma once

#include "credibility/categorical.hpp"
#include "credibility/credindex.hpp"
#include "credibility/eisslab.hpp"
#include "credibility/error.hpp"
#include "credibility/goftests.hpp"
#include "credibility/parallel.hpp"
#include "credibility/resample.hpp"
#include "credibility/statdist.hpp"
