#pragma once

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"
#include "orbitlab/weight_sequence.hpp"
#include "orbitlab/weight_families.hpp"
#include "orbitlab/zvector.hpp"
#include "orbitlab/sequences.hpp"
#include "orbitlab/salas.hpp"
#include "orbitlab/shift_certificate.hpp"
#include "orbitlab/target_schedule.hpp"
#include "orbitlab/shift_candidate.hpp"
#include "orbitlab/weak_closure.hpp"
#include "orbitlab/circle/arc.hpp"
#include "orbitlab/circle/trig_poly.hpp"
#include "orbitlab/circle/independence.hpp"
#include "orbitlab/circle/measure.hpp"
#include "orbitlab/circle/measure_io.hpp"
#include "orbitlab/circle/kronecker.hpp"
#include "orbitlab/circle/spectral.hpp"
#include "orbitlab/circle/targeting.hpp"
#include "orbitlab/circle/construction.hpp"
#include "orbitlab/circle/rajchman.hpp"
#include "orbitlab/report.hpp"
