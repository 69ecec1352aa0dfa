#pragma once

#include "lamina/kikai/epoch_gate.hpp"
#include "lamina/kikai/feedback_alignment.hpp"
#include "lamina/kikai/grad_learner.hpp"
#include "lamina/kikai/least_squares.hpp"
#include "lamina/kikai/stacked.hpp"
#include "lamina/kikai/target_prop.hpp"
