#pragma once

#include "codec.hpp"
#include "error.hpp"
#include "extractive.hpp"
#include "gateway.hpp"
#include "http_transport.hpp"
#include "media.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "text_prep.hpp"
#include "transcripts.hpp"
#include "version.hpp"
