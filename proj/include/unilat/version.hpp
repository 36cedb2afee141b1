#ifndef UNILAT_VERSION_HPP
#define UNILAT_VERSION_HPP

#define UNILAT_VERSION "0.1.0"

#endif
