/* C interface to the knotcover library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a kc_status; on failure kc_last_error() holds a
 * message for the calling thread until its next failing call. Strings
 * returned through char** are heap allocated and released with
 * kc_string_free.
 */
#ifndef KNOTCOVER_H
#define KNOTCOVER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KNOTCOVER_BUILDING)
#    define KC_API __declspec(dllexport)
#  else
#    define KC_API __declspec(dllimport)
#  endif
#else
#  define KC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kc_status {
  KC_OK = 0,
  KC_ERR_PARSE = 1,
  KC_ERR_UNKNOWN_GENERATOR = 2,
  KC_ERR_UNKNOWN_KEY = 3,
  KC_ERR_INVALID_ARGUMENT = 4,
  KC_ERR_RESOURCE = 5,
  KC_ERR_INCOMPLETE_TABLE = 6,
  KC_ERR_MISSING_DATA = 7,
  KC_ERR_IO = 8,
  KC_ERR_INTERNAL = 9
} kc_status;

typedef struct kc_presentation kc_presentation;
typedef struct kc_subgroups    kc_subgroups;
typedef struct kc_povm         kc_povm;

KC_API const char* kc_version(void);
KC_API const char* kc_status_name(kc_status status);
KC_API const char* kc_last_error(void);
KC_API void        kc_string_free(char* s);

/* Presentations. A presentation taken from the catalog carries the entry's
 * peripheral words, which cusp counts need. */
KC_API kc_status kc_presentation_parse(const char* text, kc_presentation** out);
KC_API kc_status kc_presentation_from_catalog(const char* key,
                                              kc_presentation** out);
/* Quotient by m^p l^q for one component of a catalog entry. */
KC_API kc_status kc_presentation_surgery(const char* key, size_t component,
                                         long p, long q,
                                         kc_presentation** out);
KC_API kc_status kc_presentation_render(const kc_presentation* p, char** out);
KC_API size_t kc_presentation_num_generators(const kc_presentation* p);
KC_API size_t kc_presentation_num_relators(const kc_presentation* p);
KC_API int    kc_presentation_has_peripherals(const kc_presentation* p);
KC_API void   kc_presentation_free(kc_presentation* p);

/* Catalog. JSON documents mirror the entry: key, name, presentation,
 * components, peripherals, source and the oracle object. */
KC_API kc_status kc_catalog_keys(char** out_json);
KC_API kc_status kc_catalog_entry_json(const char* key, char** out_json);
/* Sets *commute to 1 when every meridian commutes with its longitude in all
 * transitive actions of degree <= max_index. */
KC_API kc_status kc_catalog_check_peripherals(const char* key,
                                              size_t max_index, int* commute);

/* Coset enumeration. subgroup_words is a comma-separated list of words over
 * the presentation's generators; NULL or "" means the trivial subgroup. */
KC_API kc_status kc_coset_count(const kc_presentation* p,
                                const char* subgroup_words,
                                size_t max_cosets, size_t* out);
KC_API kc_status kc_coset_table_csv(const kc_presentation* p,
                                    const char* subgroup_words,
                                    size_t max_cosets, char** out);

/* Low-index subgroups. */
typedef struct kc_lowindex_options {
  uint64_t node_budget;
  size_t   image_order_cap;
  int      eliminate_generators;
} kc_lowindex_options;

KC_API void kc_lowindex_options_init(kc_lowindex_options* opts);

/* counts must hold max_index entries. On KC_ERR_RESOURCE, *partial (when
 * non-null) receives the number of classes found before the budget ran
 * out. */
KC_API kc_status kc_eta_sequence(const kc_presentation* p, size_t max_index,
                                 const kc_lowindex_options* opts,
                                 size_t* counts, size_t* partial);
KC_API kc_status kc_low_index(const kc_presentation* p, size_t max_index,
                              const kc_lowindex_options* opts,
                              kc_subgroups** out, size_t* partial);
KC_API size_t kc_subgroups_count(const kc_subgroups* s);
KC_API void   kc_subgroups_free(kc_subgroups* s);

KC_API size_t      kc_subgroup_index(const kc_subgroups* s, size_t i);
/* "cyc", "reg" or "irr"; static storage. */
KC_API const char* kc_subgroup_type(const kc_subgroups* s, size_t i);
KC_API size_t      kc_subgroup_class_size(const kc_subgroups* s, size_t i);
/* 0 when the image order exceeds the cap. */
KC_API size_t      kc_subgroup_image_order(const kc_subgroups* s, size_t i);
KC_API kc_status   kc_subgroup_homology(const kc_subgroups* s, size_t i,
                                        char** out);
KC_API kc_status   kc_subgroup_cusps(const kc_subgroups* s, size_t i,
                                     size_t* out);
/* JSON array of generator images in one-line notation, 0-based. */
KC_API kc_status   kc_subgroup_permutations_json(const kc_subgroups* s,
                                                 size_t i, char** out);
KC_API kc_status   kc_subgroup_table_csv(const kc_subgroups* s, size_t i,
                                         char** out);
/* Reidemeister-Schreier presentation of the subgroup. */
KC_API kc_status   kc_subgroup_rewrite(const kc_subgroups* s, size_t i,
                                       kc_presentation** out);

/* POVM scans. */
typedef struct kc_povm_options {
  size_t        element_cap;
  const size_t* factors; /* NULL: prime factorization of the degree */
  size_t        num_factors;
  double        rank_relative;
  double        sic;
  double        pp_gap;
  double        stabilizer;
  double        dedup;
} kc_povm_options;

typedef struct kc_povm_report {
  size_t dimension;
  size_t gram_rank;
  size_t pp;            /* clusters of numeric pairwise values */
  size_t pp_field_norm; /* clusters after taking field-norm means */
  int    is_ic;
  int    is_equiangular;
  int    is_sic;
  int    stabilizer_fiducial;
} kc_povm_report;

KC_API void      kc_povm_options_init(kc_povm_options* opts);
KC_API kc_status kc_povm_scan(const kc_subgroups* s, size_t i,
                              const kc_povm_options* opts, kc_povm** out);
KC_API size_t    kc_povm_report_count(const kc_povm* v);
/* Index of the best report: largest rank, then fewest values, then first. */
KC_API size_t    kc_povm_best(const kc_povm* v);
KC_API int       kc_povm_truncated(const kc_povm* v);
KC_API int       kc_povm_stabilizer_pool(const kc_povm* v);
KC_API kc_status kc_povm_get_report(const kc_povm* v, size_t r,
                                    kc_povm_report* out);
/* re and im must hold dimension entries. */
KC_API kc_status kc_povm_fiducial(const kc_povm* v, size_t r, double* re,
                                  double* im);
/* Largest entry of |sum of orbit projectors - d I|. */
KC_API kc_status kc_povm_orbit_sum_error(const kc_povm* v, size_t r,
                                         double* out);
/* Report as JSON, including both angle multisets. */
KC_API kc_status kc_povm_report_json(const kc_povm* v, size_t r, char** out);
KC_API void      kc_povm_free(kc_povm* v);

#ifdef __cplusplus
}
#endif

#endif /* KNOTCOVER_H */
