/* C ABI for the conic-dsrg library.
 *
 * Objects cross the boundary as opaque pointers with dedicated free
 * functions. Fallible calls return a CdsStatus and write results through
 * out-pointers, which are left untouched on failure. A thread-local message
 * for the most recent failure is available from cds_last_error; it stays
 * valid until the next failing call on the same thread.
 *
 * This header is maintained by hand and checked against the exported
 * symbols by the crate's test suite.
 */

#ifndef CONIC_DSRG_H
#define CONIC_DSRG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum CdsStatus {
  CDS_OK = 0,
  CDS_NULL_ARGUMENT = 1,
  CDS_INVALID_ARGUMENT = 2,
  CDS_PARSE_ERROR = 3,
  CDS_BUDGET_EXCEEDED = 4,
  CDS_INTERNAL_ERROR = 5,
} CdsStatus;

/* A binary field GF(2^e). */
typedef struct CdsField CdsField;

/* A loopless digraph with 0/1 adjacency. */
typedef struct CdsDigraph CdsDigraph;

/* Library version as a static string. */
const char *cds_version(void);

/* Message for the most recent failure on this thread. */
const char *cds_last_error(void);

/* Static name of a status code. */
const char *cds_status_name(CdsStatus status);

/* Parses a field spec string "e=<int>,mod=<hex>", e.g. "e=3,mod=0xB". */
CdsStatus cds_field_parse(const char *spec, CdsField **out);

/* Builds GF(2^e) with the built-in modulus for the exponent (e <= 8). */
CdsStatus cds_field_default(uint32_t exponent, CdsField **out);

/* Field order q = 2^e, or 0 for a null handle. */
uint32_t cds_field_order(const CdsField *field);

void cds_field_free(CdsField *field);

/* Builds the cover graph on the q^2 - 1 normalized nonsingular points of a
 * conic in PG(2,q): a distance-regular antipodal (q-1)-cover of the
 * complete graph on q+1 vertices. */
CdsStatus cds_gamma_build(const CdsField *field, CdsDigraph **out);

/* Builds one of the two directed strongly regular graphs with parameters
 * (63,11,8,1,2). The field order must be 8; orbit is 'A' or 'B'. */
CdsStatus cds_delta_build(const CdsField *field, char orbit, CdsDigraph **out);

/* Parses matrix01 text: optional leading '#' header lines, then n rows of
 * n characters from {0,1} with a zero diagonal and a final newline. */
CdsStatus cds_digraph_from_matrix01(const char *text, CdsDigraph **out);

/* Renders matrix01 text; release the string with cds_string_free. */
CdsStatus cds_digraph_to_matrix01(const CdsDigraph *digraph, char **out_text);

/* Number of vertices, or 0 for a null handle. */
size_t cds_digraph_order(const CdsDigraph *digraph);

/* 1 if the arc from -> to is present, 0 otherwise. */
int32_t cds_digraph_has_arc(const CdsDigraph *digraph, size_t from, size_t to);

/* The digraph with every arc reversed. */
CdsStatus cds_digraph_transpose(const CdsDigraph *digraph, CdsDigraph **out);

void cds_digraph_free(CdsDigraph *digraph);

/* Checks A^2 = tI + lambda A + mu (J - I - A) plus in/out-regularity of
 * degree k. Writes 1 or 0 to pass; a failed certificate is a negative
 * result, not an error (the first violation is reported via
 * cds_last_error). */
CdsStatus cds_verify_dsrg(const CdsDigraph *digraph, uint32_t v, uint32_t k,
                          uint32_t t, uint32_t lambda, uint32_t mu,
                          int32_t *pass);

/* Decides digraph isomorphism exactly; writes 1 or 0 to isomorphic. */
CdsStatus cds_isomorphic(const CdsDigraph *a, const CdsDigraph *b,
                         int32_t *isomorphic);

/* Order of the automorphism group. */
CdsStatus cds_automorphism_order(const CdsDigraph *digraph, uint64_t *order);

/* Exhausts all 140 transitive candidates over the field (order 8) and
 * reports the isomorphism class count (2) and the raw survivor count.
 * Either out-pointer may be null. */
CdsStatus cds_search_classes(const CdsField *field, uint32_t *classes,
                             uint32_t *survivors);

/* Frees a string returned by this library. */
void cds_string_free(char *text);

#ifdef __cplusplus
}
#endif

#endif /* CONIC_DSRG_H */
