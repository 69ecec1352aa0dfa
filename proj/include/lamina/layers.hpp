#pragma once

#include "lamina/layers/activation.hpp"
#include "lamina/layers/batch_norm.hpp"
#include "lamina/layers/dropout.hpp"
#include "lamina/layers/layer.hpp"
#include "lamina/layers/linear.hpp"
#include "lamina/layers/sequential.hpp"
