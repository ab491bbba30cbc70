#pragma once

#include "wavebound/bounds.hpp"
#include "wavebound/cli.hpp"
#include "wavebound/condition_report.hpp"
#include "wavebound/constants.hpp"
#include "wavebound/error.hpp"
#include "wavebound/io.hpp"
#include "wavebound/parallel.hpp"
#include "wavebound/philox.hpp"
#include "wavebound/quadrature.hpp"
#include "wavebound/series.hpp"
#include "wavebound/simulate.hpp"
#include "wavebound/spectral.hpp"
#include "wavebound/wavelet.hpp"
