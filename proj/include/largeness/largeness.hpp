#pragma once

#include "largeness/abelian.hpp"
#include "largeness/alexander.hpp"
#include "largeness/certificate.hpp"
#include "largeness/certify.hpp"
#include "largeness/classify.hpp"
#include "largeness/coset_table.hpp"
#include "largeness/fox.hpp"
#include "largeness/integer.hpp"
#include "largeness/laurent.hpp"
#include "largeness/low_index.hpp"
#include "largeness/matrix.hpp"
#include "largeness/presentation.hpp"
#include "largeness/rewrite.hpp"
#include "largeness/stallings.hpp"
#include "largeness/torus.hpp"
#include "largeness/torus_pipeline.hpp"
#include "largeness/verify.hpp"
#include "largeness/whitehead.hpp"
#include "largeness/word.hpp"
