/**
 * This class represents a bag B of elements of type T.
 */
public class Bag<T> {

  /**
   * @desc lst contains all elements of the bag with their proper 
   * multiplicities in an irrelevant order. 
   * @represents \forall e : T :: B(e) = (\num_of i: int | 
   *     0 <= i < lst.size() :: lst[i] = e)
   */
   private List<T> lst;

  /**
   * @desc A new empty bag is created.    
   * @ensures \forall e: T :: B(e) = 0
   */
   public Bag<T>()
   /**
    * @ensures lst.size() = 0 
    */

  /**
   * @desc Adds an element.
   * @ensures B(elem) = \old(B(elem)) + 1
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))  
   */
   public void add(T elem)
   /**
    * @desc Adds an element to the list. In order to keep the 
    * specification simple and readable, we add the element 
    * to the end of the list, although the external 
    * specification and the representation rule do 
    * not force this. 
    * @assignable lst
    * @ensures \forall i | 0 <= i < \old(lst.size()) :: 
    *     list[i] = \old(lst[i])
    * @ensures lst.size() = \old(lst.size()) + 1
    * @ensures lst[\old(lst.size())] = elem
    */

  /**
   * @desc Removes one instance of elem 
   * @requires B(elem) > 0
   * @ensures B(elem) = \old(B(elem)) - 1
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))  
   */
   public void remove(T elem)
   /**
    * @desc Removes one occurrence of elem 
    * @requires mult(elem) > 0
    * @assignable lst
    * @ensures mult(elem) = \old(mult(elem) - 1
    * @ensures \forall e: T | e != elem :: mult(e) = \old(mult(e))
    * @ensures lst.size() = \old(lst.size()) - 1 
    */

  /**
   * @desc Removes all instances of elem
   * @ensures B(elem) = 0
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))
   */
   public void removeAll(T elem)
   /**
    * @assignable lst
    * @ensures ! mult(elem) = 0
    * @ensures \forall e: T | e != elem :: mult(e) = \old(mult(e))
    * @ensures lst.size() =  \old(lst.size) - \old(mult(elem)) 
    */

  /**
   * @desc Counts the number of occurences of elem.
   * @pure
   * @ensures mult(elem) = B(elem)
   */
   public int mult(T elem)
   /**
    * @ensures \result = \num_of i: int | 0 <= i < lst.size() :: 
    *   lst[i] = elem
    */

  /**
   * @desc Counts the number of elems in the bag.
   * @pure
   * @ensures size() = \sum e: T :: B(e)
   */
   public int size()
   /**
    * @ensures size() = lst.size()
    */


}
