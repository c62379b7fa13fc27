#ifndef ADDFORMS_H
#define ADDFORMS_H

/* C interface to the addforms library. Objects are opaque handles released
 * with the matching *_free function. Every fallible call returns an af_status;
 * af_last_error() then describes the failure on the calling thread. Strings
 * returned through char** are released with af_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ADDFORMS_BUILDING_LIBRARY)
#    define AF_API __declspec(dllexport)
#  else
#    define AF_API __declspec(dllimport)
#  endif
#else
#  define AF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERR_INVALID_ARGUMENT = 1,
  AF_ERR_PARSE = 2,
  AF_ERR_GROUP_MISMATCH = 3,
  AF_ERR_CAP_EXCEEDED = 4,
  AF_ERR_IO = 5,
  AF_ERR_INTERNAL = 6
} af_status;

typedef struct af_group af_group;
typedef struct af_subset af_subset;
typedef struct af_system af_system;
typedef struct af_quantum af_quantum;
typedef struct af_poly af_poly;
typedef struct af_report af_report;

typedef struct af_options {
  unsigned threads;       /* worker threads, >= 1 */
  uint64_t work_budget;   /* cap on predicted primitive evaluations */
  uint64_t max_order;     /* cap on group orders when parsing or building groups */
} af_options;

AF_API void af_options_init(af_options* options);

AF_API const char* af_version(void);
AF_API const char* af_status_name(af_status status);
AF_API const char* af_last_error(void);
AF_API void af_string_free(char* s);

/* Groups: "Z9 x Z2". */
AF_API af_status af_group_parse(const char* text, const af_options* options, af_group** out);
AF_API uint32_t af_group_order(const af_group* group);
AF_API af_status af_group_to_string(const af_group* group, char** out);
AF_API void af_group_free(af_group* group);

/* Subsets: a literal "{0,2}", "{(1,0),(2,1)}", a JSON array, or the line format. */
AF_API af_status af_subset_parse(const af_group* group, const char* text, af_subset** out);
AF_API af_status af_subset_load(const af_group* group, const char* path, af_subset** out);
AF_API size_t af_subset_size(const af_subset* subset);
AF_API af_status af_subset_to_string(const af_subset* subset, char** out);
/* Line-format file contents. */
AF_API af_status af_subset_to_file_contents(const af_subset* subset, char** out);
AF_API void af_subset_free(af_subset* subset);

/* Systems "[!(3g1); g2-2g1]"; arity 0 infers it from the largest variable. */
AF_API af_status af_system_parse(const char* text, size_t arity, af_system** out);
AF_API size_t af_system_arity(const af_system* system);
AF_API size_t af_system_size(const af_system* system);
AF_API af_status af_system_to_string(const af_system* system, char** out);
AF_API void af_system_free(af_system* system);

AF_API af_status af_quantum_parse(const char* text, af_quantum** out);
AF_API af_status af_quantum_to_string(const af_quantum* quantum, char** out);
AF_API void af_quantum_free(af_quantum* quantum);

AF_API af_status af_poly_parse(const char* text, af_poly** out);
AF_API af_status af_poly_to_string(const af_poly* poly, char** out);
AF_API void af_poly_free(af_poly* poly);

/* Reports: JSON documents. af_report_passed is 1 unless a checked
 * statement failed. */
AF_API af_status af_report_json(const af_report* report, char** out);
AF_API int af_report_passed(const af_report* report);
AF_API void af_report_free(af_report* report);

/* Densities. */
AF_API af_status af_density(const af_system* system, const af_subset* subset, const af_options* options,
                            af_report** out);
AF_API af_status af_quantum_density(const af_quantum* quantum, const af_subset* subset, const af_options* options,
                                    af_report** out);
/* Monte Carlo estimate; with_exact adds the exact density for comparison. */
AF_API af_status af_estimate(const af_system* system, const af_subset* subset, uint64_t samples, uint64_t seed,
                             int with_exact, const af_options* options, af_report** out);

/* Set functions. */
AF_API af_status af_energy(const af_subset* subset, const af_options* options, af_report** out);
AF_API af_status af_sumset(const af_subset* a, const af_subset* b, af_report** out);
/* rB - sB */
AF_API af_status af_signed_sumset(const af_subset* b, unsigned r, unsigned s, af_report** out);
AF_API af_status af_doubling(const af_subset* a, af_report** out);
AF_API af_status af_stabilizer(const af_subset* a, af_report** out);

/* Inequalities: "kneser", "plunnecke-ruzsa", "energy-doubling", "energy-bound".
 * b may be NULL for single-set inequalities. */
AF_API af_status af_check(const char* kind, const af_subset* a, const af_subset* b, unsigned r, unsigned s,
                          af_report** out);
AF_API af_status af_check_exhaustive(const char* kind, const af_group* group, unsigned r, unsigned s,
                                     const af_options* options, af_report** out);
AF_API af_status af_check_random(const char* kind, const af_group* group, uint64_t count, uint64_t seed, unsigned r,
                                 unsigned s, const af_options* options, af_report** out);
/* region "graph" (y >= h(x)) or "energy" (y <= energy bound at x); x, y rationals. */
AF_API af_status af_check_region(const char* region, const char* x, const char* y, af_report** out);
/* function "bollobas-h", "energy-bound", "delta", "delta-prime" or
 * "delta-double-prime"; branch 0 uses the default branch rule. */
AF_API af_status af_scalar(const char* function, const char* x, unsigned branch, af_report** out);

/* Reduction. subset may be NULL; otherwise the report evaluates the bundle on it. */
AF_API af_status af_reduce(const af_poly* q, unsigned k, const af_subset* subset, const af_options* options,
                           af_report** out);
/* kind "qstar", "p-from-q" or "q-from-p"; k = 0 infers it. */
AF_API af_status af_transform(const char* kind, const af_poly* poly, unsigned k, af_report** out);
/* Builds the witness group and subset; subset_out may be NULL. */
AF_API af_status af_witness(unsigned k, const uint32_t* n, size_t count, const af_options* options, af_report** out,
                            af_subset** subset_out);
AF_API af_status af_subset_group(const af_subset* subset, af_group** out);

/* Verifiers. */
AF_API af_status af_verify_pinpoint(unsigned k, unsigned max_k, const af_options* options, af_report** out);
AF_API af_status af_verify_witness(unsigned k, const uint32_t* n, size_t count, int check_identity,
                                   const af_options* options, af_report** out);
/* g lists k elements, "(1,0),(2,1)" or "3,5"; j is 1-based. */
AF_API af_status af_verify_homdensity(const af_subset* subset, const char* g, unsigned j, const af_options* options,
                                      af_report** out);
AF_API af_status af_verify_homdensity_random(const af_group* group, unsigned k, uint64_t pairs, uint64_t seed,
                                             const af_options* options, af_report** out);
AF_API af_status af_verify_delta(const char* step, unsigned max_t, af_report** out);

#ifdef __cplusplus
}
#endif

#endif
